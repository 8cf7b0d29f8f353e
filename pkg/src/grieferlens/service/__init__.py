"""HTTP service and persistent match/annotation store."""

from .app import create_app
from .store import Conflict, MatchStore, NotFound
