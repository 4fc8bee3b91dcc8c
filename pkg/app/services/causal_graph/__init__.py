from .core import CausalGraphService
from .export import export_graph, import_graph, import_traversal, to_dot
from .lemmatizer import lemmatize

__all__ = [
    "CausalGraphService",
    "export_graph",
    "import_graph",
    "import_traversal",
    "lemmatize",
    "to_dot",
]
