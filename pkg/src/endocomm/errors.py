"""Exception hierarchy."""


class EndocommError(Exception):
    """Base class for every error raised by this package."""


class InfiniteQuotient(EndocommError):
    """A presentation whose cokernel has a free summand."""


class ShapeMismatch(EndocommError):
    """Homomorphisms whose sources and targets do not line up."""


class AmbientMismatch(EndocommError):
    """Subgroups of different ambient groups."""


class BoundExceeded(EndocommError):
    """A size guard was hit; ``size`` is the offending quantity."""

    def __init__(self, what, size, bound):
        super().__init__(f"{what} {size} exceeds bound {bound}")
        self.what = what
        self.size = size
        self.bound = bound


class InvalidModulus(EndocommError):
    pass


class RingMismatch(EndocommError):
    pass


class CarrierMismatch(EndocommError):
    pass


class NonScalarRing(EndocommError):
    """A predicate defined only for the scalar rings Z and Z/n."""


class HypothesisUnmet(EndocommError):
    """A theorem check was called outside the theorem's hypotheses."""


class InternalInconsistency(EndocommError):
    """A computed object failed a structural invariant; always a bug."""


class EquivalenceViolation(InternalInconsistency):
    """The six characterisations of endo-commutativity disagreed."""


class SpecError(EndocommError):
    """An instance description could not be parsed."""

    def __init__(self, message, line=None, column=None, path=None):
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(f"at {path}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)
        self.line = line
        self.column = column
        self.path = path
