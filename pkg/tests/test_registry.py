import pytest

from germlin.group_cert import check_product_identity
from germlin.pforms import integrability_check, radial_contraction
from germlin.registry import (
    FORM_EXAMPLES,
    GROUP_EXAMPLES,
    RegistryError,
    build_form_example,
    build_group_example,
    default_parameter_sets,
)


def test_every_group_example_constructs():
    for example_id in GROUP_EXAMPLES:
        loaded = build_group_example(example_id, order=8)
        assert loaded
        for item in loaded:
            assert len(item.presentation.gens) >= 2
            assert check_product_identity(item.presentation)


def test_every_form_example_constructs():
    for example_id in FORM_EXAMPLES:
        ex = build_form_example(example_id)
        assert integrability_check(ex.omega)
        if example_id == "ex6.1":
            assert radial_contraction(ex.omega).is_zero


def test_group_example_errors():
    with pytest.raises(RegistryError):
        build_group_example("nope")
    with pytest.raises(RegistryError):
        build_group_example("ex4.3", p=0)


def test_form_example_errors():
    with pytest.raises(RegistryError):
        build_form_example("nope")
    with pytest.raises(RegistryError):
        build_form_example("ex6.1", k=1)
    with pytest.raises(RegistryError):
        build_form_example("ex6.1", k=2, params=(1, 2, 3))
    with pytest.raises(RegistryError):
        build_form_example("ex6.1", k=2, params=(0, 1, 1, 1, 1, 1))


def test_default_parameter_sets_put_reference_point_on_singular_locus():
    from germlin.pforms import kupka_test

    for k in (2, 3, 4, 5):
        for params in default_parameter_sets(k):
            ex = build_form_example("ex6.1", k=k, params=params)
            assert kupka_test(ex.omega, (0, 1, -1, 0)), (k, params)
