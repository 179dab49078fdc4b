from ._persistra import *  # noqa: F401,F403
from ._persistra import __version__  # noqa: F401
