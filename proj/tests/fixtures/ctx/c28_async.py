import asyncio


async def fetch(url):
    async with session.get(url) as resp:
        body = await resp.read()
    return body


async def gather_all(urls):
    results = []
    async for u in iterate(urls):
        results.append(await fetch(u))
    return results


async def main():
    await asyncio.sleep(0.1)
    done = [r async for r in stream()]
    return done
