def validate(record):
    assert record, "empty record"
    assert len(record) > 2, f"too short: {len(record)}"
    if "id" not in record:
        raise KeyError("id")
    return record["id"]


def retry(func, attempts=3):
    last = None
    for attempt in range(attempts):
        try:
            return func()
        except (IOError, TimeoutError) as exc:
            last = exc
            continue
    raise RuntimeError("all attempts failed") from last
