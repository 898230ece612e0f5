"""textcat: linear SVM text categorization for document collections."""

__version__ = "0.1.0"
