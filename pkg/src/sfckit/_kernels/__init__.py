"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled extension (Cython) is used when it built successfully; set
SFCKIT_PURE=1 to force the fallback. Both backends are bit-identical, so the
choice affects speed only.
"""

import os

if os.environ.get("SFCKIT_PURE"):
    from . import _pure as impl
else:
    try:
        from . import _speed as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as impl

BACKEND = impl.BACKEND
min_entropy_partitions = impl.min_entropy_partitions
simulate_counts = impl.simulate_counts
