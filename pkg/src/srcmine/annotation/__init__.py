"""Human annotation workflow: task store and HTTP service."""

from srcmine.annotation.store import (
    AnnotationError,
    AnnotationStore,
    AnnotationTask,
    InvalidSubmission,
    LabelSubmission,
    NotTaskOwner,
    UnknownAnnotator,
    UnknownTask,
)

__all__ = [
    "AnnotationError",
    "AnnotationStore",
    "AnnotationTask",
    "InvalidSubmission",
    "LabelSubmission",
    "NotTaskOwner",
    "UnknownAnnotator",
    "UnknownTask",
]
