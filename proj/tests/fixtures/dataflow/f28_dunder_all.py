__all__ = ["api_main"]
api_main = 1
helper = 2
