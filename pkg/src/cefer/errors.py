"""Exception types shared across the package."""


class CeferError(Exception):
    pass


class EmptyTweet(CeferError):
    """Tweet has no tokens left after cleaning."""


class ParseError(CeferError):
    def __init__(self, message, line=None, path=None):
        loc = ""
        if path is not None:
            loc += f"{path}:"
        if line is not None:
            loc += f"{line}: "
        super().__init__(loc + message)
        self.line = line
        self.path = path


class UnknownLabel(CeferError):
    pass


class EmptyLexicon(CeferError):
    pass


class BadMagic(CeferError):
    pass


class VersionMismatch(CeferError):
    pass


class TruncatedRecord(CeferError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class ShapeMismatch(CeferError):
    pass


class DimMismatch(CeferError):
    pass


class LayerOutOfRange(CeferError):
    pass


class NoContentTokens(CeferError):
    pass


class NonFiniteLoss(CeferError):
    def __init__(self, epoch, batch):
        super().__init__(f"non-finite loss at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch


class EmptyEvalSet(CeferError):
    pass


class MissingRecord(CeferError):
    pass
