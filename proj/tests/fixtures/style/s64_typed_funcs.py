from typing import Optional, List


def mean(values: List[float], default:float=0.0) ->float:
    if not values:
        return default
    return sum(values)/len(values)


def find(items: List[str], key: str) -> Optional[int]:
    for i,item in enumerate(items):
        if item==key:
            return i
    return None
