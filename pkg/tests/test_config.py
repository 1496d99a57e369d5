import pytest

from polariton_optomech.config import ConfigError, load_config, parse_config


def test_parse_comments_blank_and_complex():
    cfg = parse_config(["# header", "", "nbar = 0.5  # thermal", "msq = 0.3+0.1j", "G0=1e-3"])
    assert cfg == {"nbar": 0.5, "msq": 0.3 + 0.1j, "G0": 1e-3}


@pytest.mark.parametrize(
    "lines",
    [["nbar 0.5"], ["= 1"], ["nbar = abc"], ["nbar = 1", "nbar = 2"]],
)
def test_malformed_lines_raise(lines):
    with pytest.raises(ConfigError):
        parse_config(lines)


def test_load_from_file(tmp_path):
    path = tmp_path / "p.cfg"
    path.write_text("U = 3\nGt = 1\n")
    assert load_config(path) == {"U": 3.0, "Gt": 1.0}
