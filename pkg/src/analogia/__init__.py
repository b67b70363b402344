"""Similarity, determination and typicality based analogical inference.

The package also ships numeric harnesses for the Basel problem, the Grandi
series and a multiple-source hypothesis workflow.
"""

from analogia.model import (
    AspectSchema,
    Concept,
    Connection,
    ConnectionStatus,
    DisjointDescriptionError,
    Instance,
    KnowledgeBase,
    KnowledgeBaseError,
    ParseError,
    ValidationError,
    dump_knowledge_base,
    instance_match_counts,
    load_knowledge_base,
)

__all__ = [
    "AspectSchema",
    "Concept",
    "Connection",
    "ConnectionStatus",
    "DisjointDescriptionError",
    "Instance",
    "KnowledgeBase",
    "KnowledgeBaseError",
    "ParseError",
    "ValidationError",
    "dump_knowledge_base",
    "instance_match_counts",
    "load_knowledge_base",
]

__version__ = "0.1.0"
