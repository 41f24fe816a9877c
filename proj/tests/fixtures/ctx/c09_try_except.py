def load(path):
    try:
        with open(path) as fh:
            return fh.read()
    except FileNotFoundError:
        return ""
    except (OSError, ValueError) as exc:
        raise RuntimeError("load failed") from exc
    except Exception:
        raise
    finally:
        print("done")


try:
    risky()
except:
    pass
else:
    print("ok")
finally:
    cleanup()
