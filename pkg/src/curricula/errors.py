"""Exception types shared across the package."""


class CurriculaError(Exception):
    pass


# dataset validation
class EmptyDataset(CurriculaError):
    pass


class MissingClass(CurriculaError):
    def __init__(self, class_index):
        self.class_index = class_index
        super().__init__(f"class {class_index} has no samples")


class RaggedFeatures(CurriculaError):
    pass


class ClassTooSmall(CurriculaError):
    def __init__(self, class_index):
        self.class_index = class_index
        super().__init__(f"class {class_index} has fewer than 2 samples")


class ZeroLength(CurriculaError):
    pass


# neural net
class InvalidSpec(CurriculaError):
    pass


class ShapeMismatch(CurriculaError):
    pass


class NonFiniteLoss(CurriculaError):
    pass


# scoring
class EmptyInput(CurriculaError):
    pass


class LengthMismatch(CurriculaError):
    pass


class EmptyList(CurriculaError):
    pass


class SpecNotLargerWarning(UserWarning):
    """Scorer model is not larger than the trainee model."""


# text
class EmptyCorpus(CurriculaError):
    pass


class EmptyAfterTokenize(CurriculaError):
    pass


class UnknownNgram(CurriculaError):
    def __init__(self, ngram):
        self.ngram = ngram
        super().__init__(f"n-gram {ngram!r} not present in corpus statistics")


# pacing / selection
class TooSmall(CurriculaError):
    pass


class Infeasible(CurriculaError):
    pass


# harness I/O
class BadMagic(CurriculaError):
    pass


class Ragged(CurriculaError):
    pass


class UnknownLabel(CurriculaError):
    pass


class BadSpec(CurriculaError):
    pass


class IoError(CurriculaError):
    pass
