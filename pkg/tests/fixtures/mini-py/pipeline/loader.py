"""Loading stage."""

DEFAULT_LIMIT = 50


class Loader:
    retries = 3

    def __init__(self, path):
        self.path = path

    def load(self, limit=None):
        return limit or DEFAULT_LIMIT

    def validate(self):
        return self.retries > 0


def open_source(path):
    return path
