import dataclasses

import pytest

from posnerspin.config import (
    ExperimentConfig,
    apply_overrides,
    config_sha256,
    load_config_file,
    parse_tree,
    to_tree,
    validate,
)
from posnerspin.errors import ConfigError

FULL_TOML = """
[system]
species = "posner"
doping = "Li7"

[field]
b0_tesla = 5e-5

[couplings]
topology = "strong_asymmetry"
scale = 2.5
j_p_li_hz = 0.4
j_li_li_hz = 0.01

[pairs]
entangled = ["P0", "P0"]
observed = [["P3", "P3"], ["P4", "P4"]]

[time]
t_start = 0.0
t_end = 100.0
n_points = 11

[outputs]
quantities = ["concurrence", "populations"]
oracle_check = false

[transitions]
alpha = 0.5
tol_degeneracy = 1e-7

[relaxation]
j7_hz = 2.0
tau6_s = 200.0
tau7_s = 5.0
"""


def test_defaults_validate():
    validate(ExperimentConfig())


def test_parse_full_tree(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(FULL_TOML)
    config = parse_tree(load_config_file(path))
    assert config.doping == "Li7"
    assert config.topology == "strong_asymmetry"
    assert config.j_scale == 2.5
    assert config.j_p_li_hz == 0.4
    assert config.observed == (("P3", "P3"), ("P4", "P4"))
    assert config.n_points == 11
    assert config.quantities == ("concurrence", "populations")
    assert config.alpha == 0.5
    assert config.relax_tau7_s == 5.0


def test_tree_round_trip():
    config = parse_tree(
        {"system": {"doping": "Li6"}, "couplings": {"scale": 3.0}}
    )
    assert parse_tree(to_tree(config)) == config
    # None-valued optional couplings stay out of the tree.
    assert "j_p_li_hz" not in to_tree(config)["couplings"]


def test_unknown_section_and_key_are_named():
    with pytest.raises(ConfigError, match="unknown section 'fields'"):
        parse_tree({"fields": {"b0_tesla": 1e-5}})
    with pytest.raises(ConfigError, match="system.'specie'"):
        parse_tree({"system": {"specie": "posner"}})


def test_type_errors_name_the_dotted_key():
    with pytest.raises(ConfigError, match="field.b0_tesla"):
        parse_tree({"field": {"b0_tesla": "strong"}})
    with pytest.raises(ConfigError, match="time.n_points"):
        parse_tree({"time": {"n_points": 10.5}})
    with pytest.raises(ConfigError, match="outputs.oracle_check"):
        parse_tree({"outputs": {"oracle_check": "yes"}})
    with pytest.raises(ConfigError, match="pairs.entangled"):
        parse_tree({"pairs": {"entangled": ["P0"]}})
    with pytest.raises(ConfigError, match=r"pairs.observed\[1\]"):
        parse_tree({"pairs": {"observed": [["P0", "P0"], ["P1"]]}})


@pytest.mark.parametrize(
    "tree, message",
    [
        ({"system": {"species": "water"}}, "system.species"),
        ({"system": {"doping": "Li8"}}, "system.doping"),
        ({"system": {"species": "phosphate_h", "doping": "Li7"}}, "cannot be doped"),
        ({"couplings": {"topology": "ring"}}, "couplings.topology"),
        ({"field": {"b0_tesla": -1.0}}, "b0_tesla"),
        ({"time": {"t_end": -5.0}}, "time.t_end"),
        ({"time": {"n_points": 1}}, "time.n_points"),
        ({"outputs": {"quantities": []}}, "outputs.quantities"),
        ({"outputs": {"quantities": ["entropy"]}}, "unknown quantity"),
        ({"outputs": {"quantities": ["coherence", "coherence"]}}, "duplicate"),
        ({"transitions": {"alpha": -1.0}}, "transitions.alpha"),
        ({"transitions": {"tol_degeneracy": 0.0}}, "tol_degeneracy"),
        ({"relaxation": {"tau7_s": 0.0}}, "relaxation.tau7_s"),
    ],
)
def test_validation_errors(tree, message):
    with pytest.raises(ConfigError, match=message):
        parse_tree(tree)


def test_apply_overrides_matches_direct_tree():
    tree = apply_overrides({}, ["couplings.scale=4.0", "system.doping='Li6'"])
    assert tree == {"couplings": {"scale": 4.0}, "system": {"doping": "Li6"}}
    config = parse_tree(tree)
    assert config.j_scale == 4.0
    assert config.doping == "Li6"


def test_apply_overrides_parses_toml_values():
    tree = apply_overrides(
        {}, ['pairs.observed=[["P3","P3"]]', "outputs.oracle_check=true"]
    )
    config = parse_tree(tree)
    assert config.observed == (("P3", "P3"),)
    assert config.oracle_check is True


def test_apply_overrides_does_not_mutate_input():
    base = {"couplings": {"scale": 1.0}}
    apply_overrides(base, ["couplings.scale=9.0"])
    assert base["couplings"]["scale"] == 1.0


@pytest.mark.parametrize(
    "assignment", ["scale=1.0", "couplings.scale", "couplings.scale.extra=1", "=3"]
)
def test_apply_overrides_rejects_malformed(assignment):
    with pytest.raises(ConfigError):
        apply_overrides({}, [assignment])


def test_apply_overrides_rejects_bad_toml_value():
    with pytest.raises(ConfigError, match="not valid TOML"):
        apply_overrides({}, ["system.doping=Li6"])


def test_load_config_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config_file(tmp_path / "missing.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("[system\n")
    with pytest.raises(ConfigError, match="not valid TOML"):
        load_config_file(bad)


def test_config_sha256_is_stable_and_sensitive():
    a = ExperimentConfig()
    b = ExperimentConfig()
    assert config_sha256(a) == config_sha256(b)
    c = dataclasses.replace(a, j_scale=2.0)
    assert config_sha256(c) != config_sha256(a)
    assert len(config_sha256(a)) == 64
