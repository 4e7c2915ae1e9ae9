from .cross_validation import CVSpec, Fold, CVReport, kfold_split, predict, cv_mse
from .benchmark import BenchmarkReport, compare_to_truth, run_replication, run_benchmark
