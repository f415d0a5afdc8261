"""
Historical dataset ingestion
"""

from .dataset import Dataset
from .loader import (
    CSV_COLUMNS,
    last_update_filter,
    load_dataset,
    load_datasets,
    merge_datasets,
    save_dataset,
)

__all__ = [
    'CSV_COLUMNS',
    'Dataset',
    'last_update_filter',
    'load_dataset',
    'load_datasets',
    'merge_datasets',
    'save_dataset',
]
