import json

with open('records.json') as fh:
    records = json.load(fh)
clean = [r for r in records if r.get('score',0)>=0.5]
out = {'count': len(clean), 'items':clean}
with open("out.json",'w') as fh:
    json.dump(out, fh, indent=2, sort_keys =True)
