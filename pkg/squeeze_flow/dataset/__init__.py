from .partition import (DatasetError, DatasetPartition, compile_root, concatenate, read_partition,
                        write_partition)
from .preprocessing import (LeakageReport, NormStats, SplitRecipe, build_splits, compute_norm_stats,
                            coverage_filter, denormalize, leakage_check, load_split_recipe, normalize,
                            pixel_occurrence)
from .generator import GenerationSummary, category_breakdown, generate_category

__all__ = [
    'DatasetError', 'DatasetPartition', 'read_partition', 'write_partition', 'compile_root',
    'concatenate', 'coverage_filter', 'NormStats', 'compute_norm_stats', 'normalize',
    'denormalize', 'LeakageReport', 'leakage_check', 'pixel_occurrence', 'SplitRecipe',
    'load_split_recipe', 'build_splits', 'GenerationSummary', 'generate_category',
    'category_breakdown',
]
