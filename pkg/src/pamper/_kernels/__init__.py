"""Hot training kernels: compiled core with a numpy fallback.

Both backends return identical integer counts, so trained trees do not
depend on which one is active. The compiled extension is picked when it
imported cleanly; set PAMPER_KERNEL=pure or PAMPER_KERNEL=compiled to force
a backend (the latter raises if the extension is missing).
"""
import os

from . import pure

node_counts = pure.node_counts
partition = pure.partition
backend_name = "pure"


def available_backends() -> list[str]:
    names = ["pure"]
    try:
        from . import _ct  # noqa: F401
    except ImportError:
        pass
    else:
        names.append("compiled")
    return names


def select(name: str) -> None:
    """Rebind the module-level kernel entry points to one backend."""
    global node_counts, partition, backend_name
    if name == "pure":
        impl = pure
    elif name == "compiled":
        from . import _ct as impl
    else:
        raise ValueError(f"unknown kernel backend: {name!r}")
    node_counts = impl.node_counts
    partition = impl.partition
    backend_name = name


_requested = os.environ.get("PAMPER_KERNEL", "auto").strip().lower() or "auto"
if _requested == "auto":
    try:
        select("compiled")
    except ImportError:
        pass
elif _requested in ("pure", "compiled"):
    select(_requested)
else:
    raise ValueError(
        f"PAMPER_KERNEL must be auto, pure, or compiled, not {_requested!r}"
    )
