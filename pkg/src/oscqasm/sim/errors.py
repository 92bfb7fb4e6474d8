"""Simulator error types."""


class SimError(Exception):
    code = "SimError"


class IndexOutOfRange(SimError):
    code = "IndexOutOfRange"


class ControlEqualsTarget(SimError):
    code = "ControlEqualsTarget"


class TooManyQubits(SimError):
    code = "TooManyQubits"


class ShotsOutOfRange(SimError):
    code = "ShotsOutOfRange"


class NoMeasurements(SimError):
    code = "NoMeasurements"


class BadDistribution(SimError):
    code = "BadDistribution"
