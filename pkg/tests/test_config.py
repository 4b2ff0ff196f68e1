import pytest

from rankone.config import ENV_VAR, ConfigError, RunConfig, load_config, parse_config


def test_defaults(monkeypatch):
    monkeypatch.delenv(ENV_VAR, raising=False)
    cfg = load_config(None)
    assert cfg == RunConfig()
    assert cfg.quad_tol == 1e-9 and cfg.tol is None


def test_parse_and_quadrature():
    cfg = parse_config("# run\nquad_tol = 1e-11\ninner_nodes = 30\nmax_tail_T = 500\n")
    q = cfg.quadrature()
    assert q.tol == 1e-11 and q.inner_nodes == 30 and q.max_tail_T == 500


def test_env_var(tmp_path, monkeypatch):
    p = tmp_path / "c.cfg"
    p.write_text("split = 0.25\n")
    monkeypatch.setenv(ENV_VAR, str(p))
    assert load_config().split == 0.25


def test_flags_override_file():
    cfg = parse_config("tol = 1e-3\n").merged(tol=1e-6, out=None)
    assert cfg.tol == 1e-6


@pytest.mark.parametrize("text", ["nonsense\n", "bogus = 1\n", "quad_tol = abc\n", "quad_tol = -1\n", "inner_nodes = 1\n"])
def test_bad_files(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.cfg"))
