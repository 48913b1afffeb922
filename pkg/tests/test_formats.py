import pytest

from torelli_lab.errors import InputError, ParseError
from torelli_lab.exterior import MultiWedge, wedge3
from torelli_lab.fatgraph import NotInvolution
from torelli_lab.formats import (
    MoveScript,
    load_mv,
    read_fg,
    read_lie,
    read_multiwedge,
    read_mv,
    read_text,
    read_wedge3,
    write_fg,
    write_lie,
    write_multiwedge,
    write_mv,
    write_wedge3,
)
from torelli_lab.marking import tautological_marking
from torelli_lab.nilpotent.lie import LieElement
from torelli_lab.nilpotent.markings import tautological_pi_marking

THETA_FG = """\
# the theta graph
fatgraph 6
iota: 3 4 5 0 1 2
sigma: 1 2 0 4 5 3
"""


def test_read_theta():
    doc = read_fg(THETA_FG)
    assert doc.graph.genus == 1
    assert doc.homology_marking() is None
    assert doc.pi_marking() is None


def test_homology_marking_survives_text(theta):
    m = tautological_marking(theta)
    text = write_fg(theta, m, labels={0: "root"})
    doc = read_fg(text)
    assert doc.labels == {0: "root"}
    again = doc.homology_marking()
    assert again.values == m.values
    assert again.form == m.form
    assert write_fg(doc.graph, again, labels=doc.labels) == text


def test_pi_marking_survives_text(genus2):
    pi = tautological_pi_marking(genus2)
    doc = read_fg(write_fg(genus2, pi=pi))
    again = doc.pi_marking()
    assert again.values == pi.values
    assert again.relator == pi.relator
    assert again.is_valid()


@pytest.mark.parametrize("text", [
    "",
    "graph 6\n",
    "fatgraph 6\niota: 3 4 5 0 1\nsigma: 1 2 0 4 5 3\n",
    "fatgraph 6\niota: 3 4 5 0 1 2\n",
    "fatgraph 6\niota: 3 4 5 0 1 2\nsigma: 1 2 0 4 5 3\nflip 0\n",
    "fatgraph 6\niota: 3 4 5 0 1 2\nsigma: 1 2 0 4 5 3\nlabel 9 far\n",
    "fatgraph 6\niota: 3 4 5 0 one 2\nsigma: 1 2 0 4 5 3\n",
])
def test_malformed_fg(text):
    with pytest.raises(ParseError):
        read_fg(text, source="bad.fg")


def test_fg_structure_errors_are_input_errors():
    with pytest.raises(NotInvolution):
        read_fg("fatgraph 6\niota: 1 2 0 4 5 3\nsigma: 1 2 0 4 5 3\n")


def test_hmark_lengths_must_agree():
    doc = read_fg(THETA_FG + "hmark 0 1 0\nhmark 1 0 1 0\n")
    with pytest.raises(ParseError):
        doc.homology_marking()


def test_move_script():
    script = read_mv("# loop\nstart theta.fg\nmove 0\nmove 2\n")
    assert script == MoveScript((0, 2), "theta.fg")
    assert read_mv(write_mv(script)) == script
    with pytest.raises(ParseError):
        read_mv("flip 1\n")
    with pytest.raises(ParseError):
        read_mv("move one\n")


def test_move_script_start_is_relative(tmp_path):
    path = tmp_path / "loop.mv"
    path.write_text("start theta.fg\nmove 1\n")
    assert load_mv(str(path)).start == str(tmp_path / "theta.fg")


def test_missing_file():
    with pytest.raises(InputError):
        read_text("/nonexistent/theta.fg")


def test_wedge3_text():
    w = wedge3((1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 1, 0)) + wedge3((0, 0, 1, 0), (0, 1, 0, 0), (0, 0, 0, 2))
    assert read_wedge3(write_wedge3(w)) == w
    assert read_wedge3("wedge3 4\nw3 1 0 2 1\n").coefficient(0, 1, 2) == -1
    with pytest.raises(ParseError):
        read_wedge3("wedge3 4\nw3 0 1 5 1\n")
    with pytest.raises(ParseError):
        read_wedge3("w3 0 1 2 1\n")


def test_multiwedge_text():
    x = MultiWedge.from_dict(4, 2, {(0, 3): 2, (1, 2): -1})
    text = write_multiwedge(x)
    assert text.splitlines()[0] == "mw 2 4"
    assert read_multiwedge(text) == x
    with pytest.raises(ParseError):
        read_multiwedge("mw 2 4\nterm 0 4 1\n")


def test_lie_text():
    x = LieElement.basis_element((1, 1, 2), 2) * 3
    text = write_lie(x)
    assert text == "lie 3 2\nlynd 0 3\n"
    assert read_lie(text) == x
    with pytest.raises(ParseError):
        read_lie("lie 3 2\nlynd 2 1\n")
