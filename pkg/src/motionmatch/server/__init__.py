from .app import create_app  # noqa: F401
from .session import SessionEngine  # noqa: F401
