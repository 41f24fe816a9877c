async def fetch(url):
    async with session.get(url) as resp:
        if resp.ok:
            data = await resp.json()
            for row in data:
                yield row
