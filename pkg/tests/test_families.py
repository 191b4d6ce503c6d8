import numpy as np
import pytest

from nls_ist.families import DescriptorError, parse_family, weighted_l2_distance
from nls_ist.fields import TailError


def test_bracket_and_plain_forms_agree():
    a = parse_family("nsoliton [e^{iπ/3}:1, e^{2iπ/3}:1]").spectrum()
    b = parse_family("nsoliton 1/3:1 2/3:1").spectrum()
    np.testing.assert_allclose(a.z, b.z)
    np.testing.assert_allclose(a.c, b.c)
    np.testing.assert_allclose(a.c, 1j * a.z)


@pytest.mark.parametrize("bad", ["", "tanh 1", "tanh_shift", "nsoliton", "nsoliton 1.5:1",
                                 "tanh_plus_bump 1 -1 0", "dip_family x", "wave 2"])
def test_bad_descriptors(bad):
    with pytest.raises(DescriptorError):
        parse_family(bad)


def test_values():
    x = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(parse_family("tanh_shift 1").values(x), np.tanh(x - 1))
    np.testing.assert_allclose(parse_family("dip_family 2").values(x),
                               np.tanh(x) + 2j / np.cosh(x / 2))


def test_dip_tails_need_room():
    with pytest.raises(TailError):
        parse_family("dip_family 2").field(30.0, 4096)
    parse_family("dip_family 2").field(50.0, 8192)


def test_weighted_distance():
    f = parse_family("tanh").field()
    g = parse_family("tanh_shift 0.1").field()
    d = weighted_l2_distance(f, g)
    assert d > 0 and weighted_l2_distance(f, f) == 0
    assert weighted_l2_distance(f, parse_family("tanh_shift 0.05").field()) == pytest.approx(
        d / 2, rel=0.05)
