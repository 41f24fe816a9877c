import requests


def fetch(url, retries = 3):
    for attempt in range(retries):
        resp = requests.get(url, timeout=10)
        if resp.status_code==200:
            return resp.json()
    raise RuntimeError('gave up after %d tries'%retries)
data = fetch("https://api.example.com/items?page=1&limit=50&sort=created_at_desc&fields=all")
