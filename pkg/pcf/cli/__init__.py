from .commands import main, build_parser
from .document import SCHEMA_VERSION, DocumentError
