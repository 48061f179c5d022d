"""Lightweight inference tracing.

Numerical kernels call :func:`record` with an operation name.  When an
:class:`InferenceTrace` is active (``with InferenceTrace() as tr: ...``) the
names are appended to ``tr.ops``; otherwise ``record`` is a no-op.  This is
how the package shows structurally that HDC inference never reaches an
eigendecomposition, and it doubles as a per-inference wall-clock counter.
"""

import contextvars
import time

_ACTIVE = contextvars.ContextVar("hyperdoa_trace", default=None)


def record(op):
    tr = _ACTIVE.get()
    if tr is not None:
        tr.ops.append(op)


class InferenceTrace:
    def __init__(self):
        self.ops = []
        self.elapsed_s = 0.0
        self._token = None
        self._t0 = 0.0

    def __enter__(self):
        self._token = _ACTIVE.set(self)
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed_s += time.perf_counter() - self._t0
        _ACTIVE.reset(self._token)
        return False

    def called(self, op):
        return op in self.ops

    def count(self, op):
        return self.ops.count(op)
