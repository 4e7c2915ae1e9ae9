from .study_dataset import StudyDataset
from .multi_study_data import MultiStudyData
