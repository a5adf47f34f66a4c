"""End-to-end tests for the command-line subcommands and their output tables."""
import asyncio
import csv
import json
import logging

import pytest

from photon_tunneling import run_main
from photon_tunneling.config import OUTPUT_DIR_ENV, default_config, parse_config
from photon_tunneling.core.error_handler import (
    EXIT_CONFIG_ERROR,
    EXIT_IO_ERROR,
    EXIT_NUMERICAL_ERROR,
    EXIT_OK,
    PlateauError,
    handle_simulation_errors,
)
from photon_tunneling.core.formatters import format_value, to_femtoseconds, to_micrometers
from photon_tunneling.core.storage import ResultStorage, ResultTable

logger = logging.getLogger("test_cli")


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)


@pytest.fixture
def write_config(tmp_path):
    """Write a config document next to an output directory and return its path."""
    def write(document: dict):
        document = {**document, "output": {"directory": str(tmp_path / "out")}}
        path = tmp_path / "config.json"
        path.write_text(json.dumps(document, indent=2))
        return path
    return write


def read_table(path):
    """Return (metadata, header, rows) of a result CSV file."""
    metadata = {}
    lines = []
    for line in path.read_text().splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            metadata[key] = value
        else:
            lines.append(line)
    reader = csv.reader(lines)
    header = next(reader)
    return metadata, header, list(reader)


class TestTransmittance:
    def test_empty_barrier_is_transparent(self, write_config, tmp_path):
        path = write_config({"stack": {"layers": []}})
        assert run_main(["transmittance", str(path)]) == EXIT_OK
        metadata, header, rows = read_table(tmp_path / "out" / "transmittance.csv")
        assert header == ["omega", "re_T12", "im_T12", "abs_T12_sq"]
        assert len(rows) == 4096
        assert all(float(row[3]) == pytest.approx(1.0, abs=1e-12) for row in rows)
        assert metadata["layer_count"] == "0"
        assert len(metadata["config_sha256"]) == 64

    def test_output_is_deterministic(self, write_config, tmp_path):
        path = write_config({"grid": {"count": 1024}})
        output = tmp_path / "out" / "transmittance.csv"
        assert run_main(["transmittance", str(path)]) == EXIT_OK
        first = output.read_bytes()
        assert run_main(["transmittance", str(path)]) == EXIT_OK
        assert output.read_bytes() == first

    def test_grid_points_override(self, write_config, tmp_path):
        path = write_config({})
        assert run_main(["transmittance", str(path), "--grid-points", "512"]) == EXIT_OK
        _, _, rows = read_table(tmp_path / "out" / "transmittance.csv")
        assert len(rows) == 512

    def test_output_dir_override(self, write_config, tmp_path):
        path = write_config({"grid": {"count": 256}})
        target = tmp_path / "elsewhere"
        assert run_main(["transmittance", str(path), "--output-dir", str(target)]) == EXIT_OK
        assert (target / "transmittance.csv").exists()


class TestCoincidence:
    def test_dip_metadata(self, write_config, tmp_path):
        path = write_config({"stack": {"lossless": True}})
        assert run_main(["coincidence", str(path), "--narrowband"]) == EXIT_OK
        metadata, header, rows = read_table(tmp_path / "out" / "coincidence.csv")
        assert header == ["s", "R"]
        assert len(rows) == 4001
        assert metadata["fringe_count"] == "1"
        assert float(metadata["s0_um"]) > 0
        assert all(float(row[1]) >= 0 for row in rows)

    @pytest.mark.slow
    def test_deep_lossy_stack_fringes(self, write_config, tmp_path):
        path = write_config({"stack": {"k": 24}, "pulse": {"shape": "time_limited"}})
        assert run_main(["coincidence", str(path)]) == EXIT_OK
        metadata, _, _ = read_table(tmp_path / "out" / "coincidence.csv")
        assert int(metadata["fringe_count"]) > 1
        assert abs(float(metadata["plateau_mean"]) - 1) <= 1e-3

    def test_delay_sweep_row(self, write_config, tmp_path):
        path = write_config({"sweep": {"layer_counts": [11], "losses": ["lossless"], "pulse_shapes": ["gaussian"]}})
        assert run_main(["delay-sweep", str(path)]) == EXIT_OK
        _, header, rows = read_table(tmp_path / "out" / "delay_sweep.csv")
        assert header[:5] == ["N", "l", "delta_tau", "tau_t", "fringe_count"]
        assert len(rows) == 1
        assert rows[0][0] == "11"
        assert rows[0][-1] == "true"
        assert float(rows[0][2]) > 0


class TestProfilesAndKramersKronig:
    def test_profiles_tables(self, write_config, tmp_path):
        path = write_config({"stack": {"layers": []}, "pulse": {"shape": "time_limited"}})
        assert run_main(["profiles", str(path)]) == EXIT_OK
        metadata, _, _ = read_table(tmp_path / "out" / "profile_spectrum.csv")
        assert float(metadata["spectral_overlap"]) == pytest.approx(1.0, abs=1e-9)
        _, header, rows = read_table(tmp_path / "out" / "profile_intensity.csv")
        assert header == ["t", "I_bar"]
        assert max(float(row[1]) for row in rows) == pytest.approx(1.0)

    def test_kk_check(self, write_config, tmp_path):
        path = write_config({})
        assert run_main(["kk-check", str(path)]) == EXIT_OK
        metadata, header, rows = read_table(tmp_path / "out" / "kk_check.csv")
        assert header == ["material", "omega", "eps_r_direct", "eps_r_kk"]
        assert {row[0] for row in rows} == {"lorentz_reference", "SiO2_lossy"}
        assert float(metadata["residual_lorentz_reference"]) < 1e-2


class TestSeedConfig:
    def test_seed_to_file(self, tmp_path):
        path = tmp_path / "seed.json"
        assert run_main(["--seed-config", str(path)]) == EXIT_OK
        assert parse_config(path.read_text()) == default_config()

    def test_seed_to_stdout(self, capsys):
        assert run_main(["--seed-config"]) == EXIT_OK
        assert parse_config(capsys.readouterr().out) == default_config()


class TestExitCodes:
    def test_invalid_config(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"pulse": {"t0_fs": -1}}')
        assert run_main(["coincidence", str(path)]) == EXIT_CONFIG_ERROR

    def test_invalid_grid_override(self, write_config):
        path = write_config({})
        assert run_main(["transmittance", str(path), "--grid-points", "1000"]) == EXIT_CONFIG_ERROR

    def test_missing_config_file(self, tmp_path):
        assert run_main(["transmittance", str(tmp_path / "absent.json")]) == EXIT_IO_ERROR

    def test_output_dir_is_a_file(self, write_config, tmp_path):
        path = write_config({})
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        assert run_main(["transmittance", str(path), "--output-dir", str(blocker)]) == EXIT_IO_ERROR

    def test_numerical_errors_map_to_three(self):
        @handle_simulation_errors
        async def failing() -> int:
            raise PlateauError("no plateau")

        assert asyncio.run(failing()) == EXIT_NUMERICAL_ERROR

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            run_main([])


class TestStorage:
    def test_format_value(self):
        assert format_value(0.1) == "0.10000000000000001"
        assert float(format_value(1 / 3)) == 1 / 3
        assert format_value(True) == "true"
        assert format_value(7) == "7"
        assert format_value("SiO2") == "SiO2"

    def test_unit_conversions(self):
        assert float(to_micrometers(2.5e-6)) == pytest.approx(2.5)
        assert list(to_femtoseconds([1e-15, 2e-15])) == pytest.approx([1.0, 2.0])

    def test_render(self, tmp_path):
        storage = ResultStorage(tmp_path)
        table = ResultTable("demo", ["a", "b"], [(1, 0.5), (2, 0.25)], {"units": "a [1], b [1]"})
        assert storage.render(table) == "# units: a [1], b [1]\na,b\n1,0.5\n2,0.25\n"
        assert storage.save_table(table) == tmp_path / "demo.csv"

    def test_row_width_checked(self, tmp_path):
        with pytest.raises(ValueError):
            ResultStorage(tmp_path).render(ResultTable("demo", ["a", "b"], [(1,)]))
