"""osc-qasm: run OpenQASM 2.0 circuits received as OSC messages over UDP.

A UDP server listens for ``/QuTune`` messages carrying a program, a shot
count, and a backend name; executes the circuit on the embedded
statevector simulator (or a remote provider); and replies with the
aggregated counts on ``/counts``.
"""

__version__ = "0.1.0"
