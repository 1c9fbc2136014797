class PadicError(ValueError):
    pass


class NoSquareRoot(PadicError):
    def __init__(self, D, p):
        super(NoSquareRoot, self).__init__("no square root in Q_p")
        self.D = D
        self.p = p


class PrecisionExhausted(PadicError):
    def __init__(self, cap):
        super(PrecisionExhausted, self).__init__(f"digit precision exceeded the cap of {cap} digits")
        self.cap = cap


class ZeroQuotient(PadicError, ZeroDivisionError):
    def __init__(self):
        super(ZeroQuotient, self).__init__("division by zero complete quotient")


class SchemeInvariantError(PadicError):
    """Raised when a phase precondition of an expansion scheme does not hold at step n."""

    def __init__(self, n, alpha, reason):
        super(SchemeInvariantError, self).__init__(f"step {n}: {reason} (alpha={alpha})")
        self.n = n
        self.alpha = alpha


class ZeroDenominator(PadicError):
    def __init__(self, n):
        super(ZeroDenominator, self).__init__(
            f"continued fraction hits a zero denominator at B_{n}, not expandable")
        self.n = n
