import sys
from collections import defaultdict


def analyze(stream, *, window=5, threshold=0.25):
    buckets = defaultdict(list)
    history = []
    for line_no, raw in enumerate(stream, 1):
        parts = raw.split(";")
        if len(parts) < 2:
            continue
        label, *numbers = parts
        values = [float(v) for v in numbers if v]
        if not values:
            continue
        avg = sum(values) / len(values)
        history.append(avg)
        if len(history) >= window:
            recent = history[-window:]
            spread = max(recent) - min(recent)
            flag = "volatile" if spread > threshold else "stable"
            buckets[flag].append((line_no, label, round(avg, 4)))
    return {k: v for k, v in sorted(buckets.items())}


class Summary:
    def __init__(self, buckets):
        self.buckets = buckets

    def __repr__(self):
        inner = ", ".join(f"{k}={len(v)}" for k, v in self.buckets.items())
        return f"Summary({inner})"


if __name__ == "__main__":
    report = analyze(sys.stdin)
    print(Summary(report))
