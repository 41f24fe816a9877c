import re

pattern = re.compile(r"(\w+)=(\d+)")


def parse_pairs(text):
    found = {}
    for match in pattern.finditer(text):
        key, raw = match.groups()
        found[key] = int(raw)
    return found


cleaned = " ".join(word.strip(".,") for word in document.split())
lines = [ln.rstrip() for ln in open("notes.txt") if ln.strip()]
