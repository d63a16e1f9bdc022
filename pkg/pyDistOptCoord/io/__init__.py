from .trajectory import (save_trajectory_csv, load_trajectory_csv, save_trajectory_to_nexus,
                         load_trajectory_from_nexus, trajectory_columns)
from .scenario import ScenarioConfig, default_scenario_path, load_json, save_json

__all__ = ['ScenarioConfig', 'default_scenario_path', 'load_json', 'save_json',
           'save_trajectory_csv', 'load_trajectory_csv', 'save_trajectory_to_nexus',
           'load_trajectory_from_nexus', 'trajectory_columns']
