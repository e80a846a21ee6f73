class SimplexDFFError(Exception):
    pass


class DatasetError(SimplexDFFError):
    pass


class MissingFile(DatasetError):
    pass


class MalformedLine(DatasetError):
    pass


class IndexOutOfRange(DatasetError):
    pass


class EmptyDataset(DatasetError):
    pass


class MissingResults(DatasetError):
    pass


class ComplexError(SimplexDFFError):
    pass


class NotAClique(ComplexError):
    pass


class DimensionUnavailable(ComplexError):
    pass


class EmptyDimension(ComplexError):
    pass


class VocabularyMismatch(ComplexError):
    pass


class NumericalError(SimplexDFFError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class NegativeSpectrum(NumericalError):
    pass


class AsymmetricMatrix(NumericalError):
    pass


class ClassifierError(SimplexDFFError):
    pass


class TooFewSamples(ClassifierError):
    pass


class WidthMismatch(ClassifierError):
    pass
