from pathlib import Path

from mrmp.figures import fig3ii
from mrmp.instances import Instance
from mrmp.render import BLOCK_COLOR, START_COLOR, TARGET_COLOR, render_svg

GOLDEN = Path(__file__).parent / "golden" / "fig3ii_blocking.svg"


def test_fig3ii_blocking_layer_matches_golden():
    svg = render_svg(fig3ii(), layers=("blocking",))
    assert BLOCK_COLOR in svg
    assert svg == GOLDEN.read_text()


def test_instance_only_drawing_has_positions_but_no_blocking():
    inst = Instance([(0, 0), (20, 0), (20, 10), (0, 10)], [(3, 3)], [(15, 7)])
    svg = render_svg(inst, layers=())
    assert START_COLOR in svg and TARGET_COLOR in svg
    assert BLOCK_COLOR not in svg


def test_same_input_same_bytes():
    inst = fig3ii()
    layers = ("freespace", "auras", "blocking", "motiongraph")
    assert render_svg(inst, layers=layers) == render_svg(inst, layers=layers)
