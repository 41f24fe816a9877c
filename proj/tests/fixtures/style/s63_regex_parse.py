import re

pattern = re.compile(r'^(\d{4})-(\d{2})-(\d{2})$')
def parse_date(text):
    m = pattern.match(text.strip())
    if m is None: return None
    year,month,day = m.groups()
    return ( int(year), int(month), int(day))
dates = [parse_date(s) for s in lines if s]
