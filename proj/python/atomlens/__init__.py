"""Single-atom free-space photon coupling toolkit."""

try:
    from ._atomlens import *  # noqa: F401,F403
    from ._atomlens import __version__  # noqa: F401
except ImportError:  # running against a bare build tree
    from _atomlens import *  # noqa: F401,F403
    from _atomlens import __version__  # noqa: F401
