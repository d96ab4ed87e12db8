"""Unit tests for scenario parsing, validation and serialization."""

import numpy as np
import pytest

from sirjump import (
    ConfigError,
    EpidemicParams,
    IntegratorConfig,
    JumpMeasure,
    ScenarioConfig,
    SirState,
    SweepSpec,
    parse_config,
    serialize_config,
)

FULL_DOC = """
[params]
theta = 0.0073
xi = 0.003
eta = 0.001
rho = 0.01
gamma = 0.02

[initial]
s = 7.1
i = 0.2
r = 0.0

[measure]
amplitudes = [0.001, 0.05]
rates = [1.0, 0.5]

[integrator]
dt = 0.1
t_end = 600.0
record_every = 10
scheme = "jump_euler"

[ensemble]
n_paths = 250
master_seed = 42
phi_override = 9.126e-4

[sweep]
parameter = "epsilon"
grid = [0.001, 0.01, 0.1]
"""

MINIMAL_DOC = """
params.theta = 0.0073
params.xi = 0.003
params.eta = 0.001
params.rho = 0.01
params.gamma = 0.02
initial.s = 7.1
initial.i = 0.2
initial.r = 0.0
"""


class TestParse:
    def test_full_document(self):
        config = parse_config(FULL_DOC)
        assert config.params == EpidemicParams(0.0073, 0.003, 0.001, 0.01, 0.02)
        assert config.initial == SirState(7.1, 0.2, 0.0)
        assert config.measure == JumpMeasure(((0.001, 1.0), (0.05, 0.5)))
        assert config.integrator == IntegratorConfig(0.1, 600.0, 10, "jump_euler")
        assert config.n_paths == 250
        assert config.master_seed == 42
        assert config.phi_override == 9.126e-4
        assert config.sweep == SweepSpec("epsilon", (0.001, 0.01, 0.1))

    def test_minimal_document_defaults(self):
        config = parse_config(MINIMAL_DOC)
        assert config.measure == JumpMeasure.empty()
        assert config.integrator == IntegratorConfig()
        assert config.n_paths == 1000
        assert config.master_seed == 0
        assert config.phi_override is None
        assert config.sweep is None

    def test_dotted_and_sectioned_forms_agree(self):
        sectioned = parse_config(FULL_DOC)
        dotted = parse_config(serialize_config(sectioned))
        assert dotted == sectioned

    def test_integers_accepted_for_floats(self):
        doc = MINIMAL_DOC.replace("initial.s = 7.1", "initial.s = 7")
        assert parse_config(doc).initial.s == 7.0


class TestValidation:
    def test_malformed_document(self):
        with pytest.raises(ConfigError, match="parse error"):
            parse_config("params.theta = = 1")

    def test_missing_required_key(self):
        doc = MINIMAL_DOC.replace("params.gamma = 0.02\n", "")
        with pytest.raises(ConfigError, match="params.gamma"):
            parse_config(doc)

    def test_zero_eta_names_the_invariant(self):
        doc = MINIMAL_DOC.replace("params.eta = 0.001", "params.eta = 0.0")
        with pytest.raises(ConfigError, match="eta must be positive"):
            parse_config(doc)

    def test_amplitude_below_minus_one(self):
        doc = MINIMAL_DOC + "measure.amplitudes = [-1.5]\nmeasure.rates = [1.0]\n"
        with pytest.raises(ConfigError, match="amplitude"):
            parse_config(doc)

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError, match="unknown config section 'extras'"):
            parse_config(MINIMAL_DOC + "extras.x = 1\n")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown config key 'params.beta'"):
            parse_config(MINIMAL_DOC + "params.beta = 1.0\n")

    def test_bare_top_level_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown config section 'loose'"):
            parse_config(MINIMAL_DOC + "loose = 1\n")

    def test_known_section_as_bare_key_rejected(self):
        with pytest.raises(ConfigError, match="dotted section"):
            parse_config("params = 1\n")

    def test_measure_arrays_must_pair(self):
        doc = MINIMAL_DOC + "measure.amplitudes = [0.001]\nmeasure.rates = [1.0, 2.0]\n"
        with pytest.raises(ConfigError, match="equal length"):
            parse_config(doc)

    def test_measure_must_be_arrays(self):
        doc = MINIMAL_DOC + "measure.amplitudes = 0.001\nmeasure.rates = [1.0]\n"
        with pytest.raises(ConfigError, match="arrays"):
            parse_config(doc)

    def test_negative_initial_state(self):
        doc = MINIMAL_DOC.replace("initial.r = 0.0", "initial.r = -0.5")
        with pytest.raises(ConfigError, match="r must be non-negative"):
            parse_config(doc)

    def test_bool_is_not_a_number(self):
        doc = MINIMAL_DOC.replace("params.xi = 0.003", "params.xi = true")
        with pytest.raises(ConfigError, match="params.xi"):
            parse_config(doc)

    def test_n_paths_must_be_positive_integer(self):
        with pytest.raises(ConfigError, match="n_paths"):
            parse_config(MINIMAL_DOC + "ensemble.n_paths = 0\n")
        with pytest.raises(ConfigError, match="n_paths"):
            parse_config(MINIMAL_DOC + "ensemble.n_paths = 2.5\n")

    def test_master_seed_non_negative(self):
        with pytest.raises(ConfigError, match="master_seed"):
            parse_config(MINIMAL_DOC + "ensemble.master_seed = -1\n")

    def test_phi_override_must_be_finite(self):
        with pytest.raises(ConfigError, match="phi_override"):
            parse_config(MINIMAL_DOC + "ensemble.phi_override = inf\n")

    def test_scheme_validated(self):
        with pytest.raises(ConfigError, match="scheme"):
            parse_config(MINIMAL_DOC + 'integrator.scheme = "milstein"\n')

    def test_record_every_must_be_integer(self):
        with pytest.raises(ConfigError, match="record_every"):
            parse_config(MINIMAL_DOC + "integrator.record_every = 2.0\n")

    def test_dt_validated(self):
        with pytest.raises(ConfigError, match="integrator"):
            parse_config(MINIMAL_DOC + "integrator.dt = 0.0\n")

    @pytest.mark.parametrize("token", ["epsilon", "theta", "xi", "psi0-proxy", "psi0"])
    def test_sweep_parameter_tokens(self, token):
        doc = MINIMAL_DOC + f'sweep.parameter = "{token}"\nsweep.grid = [0.1, 0.2]\n'
        assert parse_config(doc).sweep.parameter == token

    def test_sweep_parameter_rejected(self):
        doc = MINIMAL_DOC + 'sweep.parameter = "delta"\nsweep.grid = [0.1]\n'
        with pytest.raises(ConfigError, match="sweep.parameter"):
            parse_config(doc)

    def test_sweep_grid_strictly_increasing(self):
        doc = MINIMAL_DOC + 'sweep.parameter = "xi"\nsweep.grid = [0.2, 0.1]\n'
        with pytest.raises(ConfigError, match="increasing"):
            parse_config(doc)

    def test_sweep_grid_non_empty(self):
        doc = MINIMAL_DOC + 'sweep.parameter = "xi"\nsweep.grid = []\n'
        with pytest.raises(ConfigError, match="grid"):
            parse_config(doc)

    def test_sweep_requires_parameter(self):
        doc = MINIMAL_DOC + "sweep.grid = [0.1]\n"
        with pytest.raises(ConfigError, match="sweep.parameter"):
            parse_config(doc)


class TestRoundTrip:
    def test_full_config(self):
        config = parse_config(FULL_DOC)
        assert parse_config(serialize_config(config)) == config

    def test_minimal_config(self):
        config = parse_config(MINIMAL_DOC)
        assert parse_config(serialize_config(config)) == config

    def test_randomized_configs(self):
        rng = np.random.default_rng(6021)
        for _ in range(50):
            theta, eta, rho, gamma = rng.uniform(1e-4, 3.0, 4)
            xi = float(rng.uniform(0.0, 3.0))
            atoms = tuple(
                (rng.uniform(-0.9, 4.0), rng.uniform(0.0, 5.0))
                for _ in range(rng.integers(0, 4))
            )
            config = ScenarioConfig(
                params=EpidemicParams(theta, xi, eta, rho, gamma),
                initial=SirState(*rng.uniform(0.0, 10.0, 3)),
                measure=JumpMeasure(atoms),
                integrator=IntegratorConfig(
                    dt=float(rng.uniform(0.01, 0.5)),
                    t_end=float(rng.uniform(1.0, 100.0)),
                    record_every=int(rng.integers(1, 20)),
                    scheme=("jump_euler", "deterministic_rk4")[int(rng.integers(2))],
                ),
                n_paths=int(rng.integers(1, 5000)),
                master_seed=int(rng.integers(0, 2**32)),
                phi_override=(None, float(rng.normal()))[int(rng.integers(2))],
                sweep=(None, SweepSpec("xi", tuple(sorted(
                    set(float(v) for v in rng.uniform(0.001, 1.0, 3))
                ))))[int(rng.integers(2))],
            )
            assert parse_config(serialize_config(config)) == config
