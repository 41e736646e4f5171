"""Tests for the command-line front end."""

import json
import shutil
import subprocess
from fractions import Fraction

import pytest

from clusterscatter import lattice
from clusterscatter.brokenlines import enumerate_broken_lines
from clusterscatter.cli import (
    JobSpec,
    canonical_json,
    emit_svg,
    emit_tikz,
    job_from_json,
    main,
    named_quiver,
    parse_int_vec,
    parse_point,
    parse_rational,
    run,
)
from clusterscatter.cluster import initial_seed, path_quiver_exchange, rank2_exchange
from clusterscatter.errors import InputError
from clusterscatter.quiver import kronecker_quiver, path_quiver
from clusterscatter.scattering import complete_rank2, initial_diagram


@pytest.fixture()
def cli(capsys):
    def invoke(*args):
        code = main(list(args))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


@pytest.fixture()
def restore_max_terms():
    saved = lattice.MAX_TERMS
    yield
    lattice.MAX_TERMS = saved


class TestParsing:
    def test_int_vec(self):
        assert parse_int_vec("5,6") == (5, 6)
        assert parse_int_vec(" 1 , -2 ") == (1, -2)
        with pytest.raises(InputError):
            parse_int_vec("1,two")
        with pytest.raises(InputError):
            parse_int_vec("")

    def test_rational_exact_only(self):
        assert parse_rational("-3/2") == Fraction(-3, 2)
        assert parse_rational("7") == 7
        with pytest.raises(InputError):
            parse_rational("1.5")
        with pytest.raises(InputError):
            parse_rational("1e3")
        with pytest.raises(InputError):
            parse_rational("1/0")

    def test_point(self):
        assert parse_point("1,-3/2") == (Fraction(1), Fraction(-3, 2))

    def test_named_quivers(self):
        assert named_quiver("kronecker2") == kronecker_quiver(2)
        assert named_quiver("kronecker13") == kronecker_quiver(13)
        assert named_quiver("a3") == path_quiver(3)
        with pytest.raises(InputError):
            named_quiver("d4")
        with pytest.raises(InputError):
            named_quiver("kroneckerx")


class TestJobSpec:
    def test_validation(self):
        with pytest.raises(InputError, match="unknown command"):
            JobSpec(command="dance")
        with pytest.raises(InputError, match="output format"):
            JobSpec(command="grass", output_format="wav")
        with pytest.raises(InputError, match="not available"):
            JobSpec(command="grass", output_format="svg")
        with pytest.raises(InputError, match="requires an order"):
            JobSpec(command="scatter")
        with pytest.raises(InputError, match="positive integer"):
            JobSpec(command="scatter", order=0)

    def test_job_from_json(self):
        job = job_from_json(
            {"command": "grass", "inputs": {"b": 2, "D": [1, 2], "e": [0, 1]}}
        )
        assert job.command == "grass"
        assert job.output_format == "text"
        with pytest.raises(InputError, match="unknown job keys"):
            job_from_json({"command": "grass", "extra": 1})
        with pytest.raises(InputError, match="missing"):
            job_from_json({"inputs": {}})


class TestGrassCommand:
    def test_worked_example(self, cli):
        code, out, err = cli("grass", "--quiver", "kronecker2", "--D", "5,6",
                             "--e", "2,4")
        assert (code, out, err) == (0, "18\n", "")

    def test_empty_grassmannian(self, cli):
        code, out, _ = cli("grass", "--quiver", "kronecker2", "--D", "1,2",
                           "--e", "1,1")
        assert (code, out) == (0, "0\n")

    def test_json_document(self, cli):
        code, out, _ = cli("grass", "--quiver", "kronecker2", "--D", "5,6",
                           "--e", "2,4", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["euler_characteristic"] == 18
        coeffs = doc["counting_polynomial"]
        assert sum(coeffs) == 18
        assert coeffs == coeffs[::-1]

    def test_missing_argument_exits_two(self):
        with pytest.raises(SystemExit) as info:
            main(["grass", "--quiver", "kronecker2", "--D", "5,6"])
        assert info.value.code == 2


THREE_TERM_TEXT = """\
theta b=2, m0 = (1,-1,0,0), endpoint = (3/2,1), order 8
value = A1^-1*A2^-1*X2 + A1^-1*A2*X1*X2 + A1*A2^-1
broken lines: 3
  [1] A1^-1*A2^-1*X2  (bends (0,1)^1)
  [2] A1^-1*A2*X1*X2  (bends (0,1)^1, (1,0)^1)
  [3] A1*A2^-1  (straight)
"""


class TestThetaCommand:
    def test_three_term_golden(self, cli):
        code, out, err = cli("theta", "--b", "2", "--m", "1,-1,0,0",
                             "--endpoint", "3/2,1", "--order", "8")
        assert (code, err) == (0, "")
        assert out == THREE_TERM_TEXT

    def test_on_wall_endpoint_guidance(self, cli):
        code, out, err = cli("theta", "--b", "2", "--m", "1,-1,0,0",
                             "--endpoint", "1,-3/2", "--order", "8")
        assert code == 2
        assert out == ""
        assert "wall" in err and "jumps" in err

    def test_five_term_slice_view(self, cli):
        code, out, _ = cli("theta", "--b", "2", "--m", "2,-2,-1,-1",
                           "--endpoint", "1,-3/2", "--order", "8")
        assert code == 0
        assert "broken lines: 5" in out
        assert (
            "value = A1^-2*A2^-2*X1^-1*X2 + 2*A1^-2*X2 + A1^-2*A2^2*X1*X2"
            " + 2*A2^-2*X1^-1 + A1^2*A2^-2*X1^-1*X2^-1" in out
        )

    def test_json_lines_match_text_count(self, cli):
        code, out, _ = cli("theta", "--b", "2", "--m", "1,-1,0,0",
                           "--endpoint", "3/2,1", "--order", "8", "--json")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["lines"]) == 3
        assert doc["value"] == {
            "-1,-1,0,1": 1,
            "-1,1,1,1": 1,
            "1,-1,0,0": 1,
        }

    def test_byte_identical_reruns(self, cli):
        first = cli("theta", "--b", "2", "--m", "1,-1,0,0",
                    "--endpoint", "3/2,1", "--order", "8", "--json")
        second = cli("theta", "--b", "2", "--m", "1,-1,0,0",
                     "--endpoint", "3/2,1", "--order", "8", "--json")
        assert first == second
        assert canonical_json(json.loads(first[1])) == first[1]


SCATTER_B1_TEXT = """\
scattering diagram b=1, order 6: 3 walls
  line normal (1,0) direction (0,1) incoming f = 1 + A2*X1
  line normal (0,1) direction (1,0) incoming f = A1^-1*X2 + 1
  ray  normal (1,1) direction (1,-1) outgoing f = A1^-1*A2*X1*X2 + 1
"""


class TestScatterCommand:
    def test_b1_golden_text(self, cli):
        code, out, err = cli("scatter", "--b", "1", "--order", "6")
        assert (code, err) == (0, "")
        assert out == SCATTER_B1_TEXT

    def test_b1_svg_five_rays(self, cli):
        code, out, _ = cli("scatter", "--b", "1", "--order", "6", "--svg")
        assert code == 0
        assert out.count('class="ray"') == 5
        assert out.count('class="wall-label"') == 5

    def test_b2_svg_at_least_seven_rays_with_central(self, cli):
        code, out, _ = cli("scatter", "--b", "2", "--order", "6", "--svg")
        assert code == 0
        assert out.count('class="ray"') >= 7
        # the central ray goes along (1,-1): drawn endpoint (270, 270)
        assert 'x2="270.00" y2="270.00"' in out

    def test_json_matches_diagram_dump(self, cli):
        code, out, _ = cli("scatter", "--b", "1", "--order", "6", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["diagram"]["order"] == 6
        assert len(doc["diagram"]["walls"]) == 3

    def test_tikz_output(self, cli):
        code, out, _ = cli("scatter", "--b", "1", "--order", "6", "--tikz")
        assert code == 0
        assert out.startswith("\\begin{tikzpicture}")
        assert out.rstrip().endswith("\\end{tikzpicture}")
        assert out.count("\\draw (0,0) --") == 5


STRATA_TEXT = """\
wall-crossing strata, quiver kronecker2, D = (5,6), e = (2,4), endpoint = (2,1), order 6
broken lines ending at exponent (-1,-2,2,4): 2
line 1: bends (1,2)^2
  filtration: (1,2) x2
  poincare polynomial: q^6 + q^5 + 2*q^4 + 2*q^3 + 2*q^2 + q + 1
  value at q=1: 10
  stability phases: 10 + 8i | decreasing: yes
line 2: bends (2,3)^1, (0,1)^1
  filtration: (2,3) x1, (0,1) x1
  poincare polynomial: q^5 + 2*q^4 + 2*q^3 + 2*q^2 + q
  value at q=1: 8
  stability phases: 8 + 7i, 2 + 1i | decreasing: yes
total over strata: 18
finite-field Euler characteristic: 18
agreement: yes
"""


class TestStrataCommand:
    def test_worked_example_golden(self, cli):
        code, out, err = cli("strata", "--quiver", "kronecker2", "--D", "5,6",
                             "--e", "2,4", "--endpoint", "2,1")
        assert (code, err) == (0, "")
        assert out == STRATA_TEXT

    def test_json_document(self, cli):
        code, out, _ = cli("strata", "--quiver", "kronecker2", "--D", "5,6",
                           "--e", "2,4", "--endpoint", "2,1", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["total"] == 18
        assert doc["euler_characteristic"] == 18
        assert doc["match"] is True
        assert [line["value_at_one"] for line in doc["lines"]] == [10, 8]
        two_step = doc["lines"][1]
        assert two_step["hn"]["decreasing"] is True
        assert two_step["hn"]["values"] == [["8", "7"], ["2", "1"]]

    def test_higher_rank_rejected(self, cli):
        code, _, err = cli("strata", "--quiver", "a3", "--D", "1,1,1",
                           "--e", "1,0,0", "--endpoint", "1,1")
        assert code == 2
        assert "rank-2" in err


class TestMutateCommand:
    def test_two_step_word(self, cli):
        code, out, _ = cli("mutate", "--b", "2", "--word", "1,2")
        assert code == 0
        assert "seed b=2 after word (1,2):" in out
        assert "A1' = A1^-1 + A1^-1*A2^2*X1" in out
        assert "c-vectors sign-coherent: yes" in out

    def test_json(self, cli):
        code, out, _ = cli("mutate", "--b", "2", "--word", "1,2", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["seed"]["word"] == [1, 2]
        assert doc["seed"]["rank"] == 2

    def test_empty_word_rejected(self, cli):
        code, _, err = cli("mutate", "--b", "2", "--word", "")
        assert code == 2
        assert "word" in err


class TestArCommand:
    def test_translate_golden(self, cli):
        code, out, err = cli("ar", "--quiver", "kronecker2", "--tau", "2,3")
        assert (code, out, err) == (0, "tau (2,3) = (0,1)\n", "")

    def test_translate_of_projective_fails(self, cli):
        code, _, err = cli("ar", "--quiver", "kronecker2", "--tau", "0,1")
        assert code == 2
        assert "projective" in err

    def test_inverse_translate(self, cli):
        code, out, _ = cli("ar", "--quiver", "kronecker2", "--tau-inv", "0,1")
        assert (code, out) == (0, "tau^-1 (0,1) = (2,3)\n")

    def test_classify(self, cli):
        code, out, _ = cli("ar", "--quiver", "kronecker2", "--classify", "2,3")
        assert code == 0
        assert out == "dim (2,3): component P, orbit of vertex 2, translate steps 1\n"

    def test_component_dot(self, cli):
        code, out, _ = cli("ar", "--quiver", "a3", "--component", "P",
                           "--bound", "3", "--dot")
        assert code == 0
        assert out.startswith("digraph")
        assert "dim=(1,1,1)" in out

    def test_requires_exactly_one_action(self, cli):
        code, _, err = cli("ar", "--quiver", "kronecker2")
        assert code == 2
        assert "exactly one" in err
        code, _, err = cli("ar", "--quiver", "kronecker2", "--tau", "2,3",
                           "--classify", "2,3")
        assert code == 2


class TestCheckCommand:
    def test_full_suite_passes(self, cli):
        code, out, err = cli("check")
        assert (code, err) == (0, "")
        assert out.rstrip().endswith("PASS (7 checks)")
        assert out.count("ok  ") == 7
        assert "FAIL" not in out

    def test_single_check(self, cli):
        code, out, _ = cli("check", "--only", "kronecker-translate")
        assert code == 0
        assert out == "ok   kronecker-translate\nPASS (1 checks)\n"

    def test_unknown_check(self, cli):
        code, _, err = cli("check", "--only", "nope")
        assert code == 2
        assert "known checks" in err


class TestRunJob:
    def test_job_file_matches_flag_invocation(self, cli, tmp_path):
        job = {
            "command": "theta",
            "inputs": {
                "b": 2,
                "m": [1, -1, 0, 0],
                "endpoint": ["3/2", "1"],
            },
            "output_format": "json",
            "order": 8,
        }
        path = tmp_path / "job.json"
        path.write_text(json.dumps(job), encoding="utf-8")
        via_job = cli("run", "--job", str(path))
        direct = cli("theta", "--b", "2", "--m", "1,-1,0,0",
                     "--endpoint", "3/2,1", "--order", "8", "--json")
        assert via_job == direct
        assert via_job[0] == 0

    def test_invalid_json_exits_two(self, cli, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        code, _, err = cli("run", "--job", str(path))
        assert code == 2
        assert "not valid JSON" in err

    def test_unknown_key_exits_two(self, cli, tmp_path):
        path = tmp_path / "odd.json"
        path.write_text(json.dumps({"command": "check", "magic": 1}),
                        encoding="utf-8")
        code, _, err = cli("run", "--job", str(path))
        assert code == 2
        assert "unknown job keys" in err

    def test_missing_file_exits_two(self, cli):
        code, _, err = cli("run", "--job", "/nonexistent/job.json")
        assert code == 2
        assert "cannot read" in err


class TestResourceCeilings:
    def test_subspace_limit_exit_three(self, cli, monkeypatch):
        # Use a dimension vector no other test touches: the per-process
        # histogram cache would otherwise satisfy the query without
        # enumerating any subspaces.
        monkeypatch.setenv("CLUSTERSCATTER_SUBSPACE_LIMIT", "2")
        code, _, err = cli("grass", "--quiver", "kronecker2", "--D", "7,8",
                           "--e", "3,4")
        assert code == 3
        assert "resource limit" in err

    def test_series_term_limit_exit_three(self, cli, monkeypatch,
                                          restore_max_terms):
        monkeypatch.setenv("CLUSTERSCATTER_MAX_TERMS", "3")
        code, _, err = cli("scatter", "--b", "2", "--order", "8")
        assert code == 3
        assert "resource limit" in err

    def test_bad_ceiling_value_exit_two(self, cli, monkeypatch,
                                        restore_max_terms):
        monkeypatch.setenv("CLUSTERSCATTER_MAX_TERMS", "lots")
        code, _, err = cli("scatter", "--b", "1", "--order", "4")
        assert code == 2
        assert "CLUSTERSCATTER_MAX_TERMS" in err


@pytest.fixture(scope="module")
def b2_diagram():
    seed = initial_seed(rank2_exchange(2))
    return complete_rank2(initial_diagram(seed, 6), 6)


class TestEmitSvg:
    def test_empty_diagram_axes_only(self):
        svg = emit_svg(None)
        assert 'class="axes"' in svg
        assert 'class="walls"' not in svg
        assert svg.startswith("<svg ")
        assert svg.rstrip().endswith("</svg>")

    def test_wall_count_and_labels(self, b2_diagram):
        svg = emit_svg(b2_diagram)
        assert svg.count('class="ray"') >= 7
        assert svg.count('class="wall-label"') == svg.count('class="ray"')

    def test_broken_line_overlay_bend_points(self, b2_diagram):
        lines = enumerate_broken_lines(
            (7, -6, 0, 0), (2, 1), b2_diagram, 6,
            final_filter=(-1, -2, 2, 4),
        )
        assert len(lines) == 2
        svg = emit_svg(b2_diagram, lines)
        assert svg.count('class="broken-line"') == 2
        assert svg.count('class="bend"') == 3
        # bend of the two-fold line sits on the (2,-1) ray: (6/5,-3/5)*55
        assert '<circle class="bend" cx="66.00" cy="33.00"' in svg
        # the x-axis bend of the two-step line: (3/2, 0)*55
        assert 'cx="82.50" cy="0.00"' in svg
        assert svg.count('class="segment-label"') == 2 + 3

    def test_deterministic(self, b2_diagram):
        assert emit_svg(b2_diagram) == emit_svg(b2_diagram)

    def test_higher_rank_rejected(self):
        seed = initial_seed(path_quiver_exchange(3))
        diagram = initial_diagram(seed, 2)
        with pytest.raises(InputError, match="two-dimensional"):
            emit_svg(diagram)


class TestEmitTikz:
    def test_structure(self):
        seed = initial_seed(rank2_exchange(1))
        diagram = complete_rank2(initial_diagram(seed, 6), 6)
        tikz = emit_tikz(diagram)
        assert tikz.startswith("\\begin{tikzpicture}")
        assert tikz.count("\\draw (0,0) --") == 5
        assert "$1 + A_{2}X_{1}$" in tikz.replace(" X", "X") or "A_{2}" in tikz
        assert emit_tikz(diagram) == tikz


class TestRunApi:
    def test_run_grass_job_directly(self):
        job = JobSpec(
            command="grass",
            inputs={"quiver": "kronecker2", "D": [5, 6], "e": [2, 4]},
        )
        assert run(job) == "18\n"


@pytest.mark.skipif(
    shutil.which("clusterscatter") is None,
    reason="console script not installed",
)
def test_console_script_subprocess():
    proc = subprocess.run(
        ["clusterscatter", "grass", "--quiver", "kronecker2",
         "--D", "5,6", "--e", "2,4"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert proc.stdout == "18\n"
