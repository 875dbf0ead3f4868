"""Exception hierarchy shared by all modules."""


class MaxPlusError(Exception):
    pass


class DimensionMismatch(MaxPlusError, ValueError):
    pass


class DivergentStar(MaxPlusError):
    """Some closure entry is +inf because a strictly positive cycle is reachable.

    ``cycle`` lists the state labels of one positive cycle in traversal order
    (the closing edge returns to ``cycle[0]``); ``divergent`` is the boolean
    matrix of pairs (i, j) whose closure entry diverges.
    """

    def __init__(self, cycle, weight, divergent=None):
        self.cycle = list(cycle)
        self.weight = weight
        self.divergent = divergent
        super().__init__(
            "positive cycle %s with weight %g makes the closure diverge"
            % ("->".join(self.cycle), weight)
        )


class InaccessibleState(MaxPlusError):
    def __init__(self, state):
        self.state = state
        super().__init__("state %r is not accessible from the basepoint" % (state,))


class NonConvergent(MaxPlusError):
    pass


class EmptySupport(MaxPlusError):
    pass


class NotSuperharmonic(MaxPlusError):
    def __init__(self, report):
        self.report = report
        bad = ", ".join(report.failures()[:5])
        super().__init__("vector is not superharmonic (worst states: %s)" % bad)


class NotHarmonic(MaxPlusError):
    def __init__(self, report):
        self.report = report
        bad = ", ".join(report.failures()[:5])
        super().__init__("vector is not harmonic (worst states: %s)" % bad)


class BrokenPath(MaxPlusError):
    pass


class Unreachable(MaxPlusError):
    pass


class EmptyZ(MaxPlusError):
    pass


class HorizonExhausted(MaxPlusError):
    def __init__(self, certificate, message):
        self.certificate = certificate
        super().__init__(message)


class Disconnected(MaxPlusError):
    pass


class NotDistanceLike(MaxPlusError):
    def __init__(self, report):
        self.report = report
        super().__init__(
            "function is not distance-like on the window (%d violations)"
            % len(report.violations)
        )


class UnknownTemplate(MaxPlusError, KeyError):
    pass
