from .scenarios import ScenarioSpec, SCENARIOS, get_scenario
from .simulate import generate_truth, generate_data
from .manifest import load_multistudy, write_multistudy
