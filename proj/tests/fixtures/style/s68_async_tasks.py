import asyncio


async def fetch_one(session, url):
    async with session.get(url) as resp:
        return await resp.json()


async def main(urls):
    results=await asyncio.gather(*[fetch_one(s,u) for u in urls])
    return  [r for r in results if r]
asyncio.run(main(['https://a.example','https://b.example']))
