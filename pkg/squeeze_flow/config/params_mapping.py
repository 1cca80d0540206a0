def _physical(field: str) -> dict:
    return {'field': field, 'transformer': 'parse_float'}


def _count(field: str) -> dict:
    return {'field': field, 'transformer': 'parse_int'}


PARAMS_FILE_MAPPING = {
    # Fluid and plates
    'viscosity': _physical('viscosity'),
    'surface_tension': _physical('surface_tension'),
    'contact_angle_cos_sum': _physical('contact_angle_cos_sum'),
    'droplet_volume': _physical('droplet_volume'),
    'initial_gap': _physical('initial_gap'),
    'h_ref': _physical('h_ref'),
    'external_force': _physical('external_force'),
    'ambient_pressure': _physical('ambient_pressure'),

    # Geometry
    'nozzle_n': _count('nozzle_n'),
    'nozzle_pitch': _physical('nozzle_pitch'),
    'cells_per_pitch': _count('cells_per_pitch'),
    'grid_n': {
        'field': None,          # derived, checked against nozzle_n * cells_per_pitch
        'transformer': 'parse_int',
        'derived': 'grid_n'
    },
    'cell_size': {
        'field': None,          # derived, checked against nozzle_pitch / cells_per_pitch
        'transformer': 'parse_float',
        'derived': 'cell_size'
    },

    # Termination
    'term_coverage_max': _physical('term_coverage_max'),
    'term_time_max': _physical('term_time_max'),
    'term_h_min': _physical('term_h_min'),

    # Numerics
    'cfl_number': _physical('cfl_number'),
    'gap_change_per_step_max': _physical('gap_change_per_step_max'),
    'wet_threshold': _physical('wet_threshold'),
    'solver_tol': _physical('solver_tol'),
    'solver_max_iter': _count('solver_max_iter'),
    'subcell_samples': _count('subcell_samples'),
    'interface_subcell': {'field': 'interface_subcell', 'transformer': 'parse_bool'},
    'theta_min': _physical('theta_min'),
    'initial_snapshot_time': _physical('initial_snapshot_time'),
    'min_timestep': _physical('min_timestep'),
    'redistribution_sweeps': _count('redistribution_sweeps'),
    'front_compaction': {'field': 'front_compaction', 'transformer': 'parse_bool'},
}
