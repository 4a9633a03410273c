import numpy as np

from phonoscope import ConfusionMatrix, PhonemeInventory, accumulate
from phonoscope.confusion import SpeakerProfile
from phonoscope.heatmap import CELL, MARGIN_LEFT, MARGIN_TOP, svg_heatmap

INV = PhonemeInventory.default()


def cell_fill(svg, row, col):
    x = MARGIN_LEFT + col * CELL
    y = MARGIN_TOP + row * CELL
    marker = f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="'
    for line in svg.splitlines():
        if line.startswith(marker):
            return line.split('fill="')[1].split('"')[0]
    raise AssertionError(f"no cell at ({row}, {col})")


def test_zero_matrix_uniformly_lightest():
    svg = svg_heatmap(np.zeros((40, 40)), INV.symbols)
    fills = {
        line.split('fill="')[1].split('"')[0]
        for line in svg.splitlines()
        if line.startswith("<rect x=")
    }
    assert fills == {"#ffffff"}


def test_single_nonzero_cell_is_darkest():
    grid = np.zeros((40, 40))
    grid[3, 7] = 12.0
    svg = svg_heatmap(grid, INV.symbols)
    assert cell_fill(svg, 3, 7) == "#000000"
    assert cell_fill(svg, 3, 8) == "#ffffff"
    assert cell_fill(svg, 4, 7) == "#ffffff"


def test_row_scaling_vs_global_scaling():
    grid = np.zeros((40, 40))
    grid[0, 1] = 2.0   # row 0 max
    grid[1, 2] = 10.0  # global max
    per_row = svg_heatmap(grid, INV.symbols, per_row=True)
    assert cell_fill(per_row, 0, 1) == "#000000"
    assert cell_fill(per_row, 1, 2) == "#000000"
    global_scale = svg_heatmap(grid, INV.symbols, per_row=False)
    assert cell_fill(global_scale, 1, 2) == "#000000"
    assert cell_fill(global_scale, 0, 1) != "#000000"


def test_byte_determinism():
    rng = np.random.default_rng(1)
    grid = rng.integers(0, 20, size=(40, 40)).astype(float)
    assert svg_heatmap(grid, INV.symbols) == svg_heatmap(grid.copy(), INV.symbols)


def test_axis_labels_in_inventory_order():
    svg = svg_heatmap(np.zeros((40, 40)), INV.symbols)
    def unescape(s):
        return s.replace("&lt;", "<").replace("&gt;", ">").replace("&amp;", "&")

    text_labels = [
        unescape(line.rsplit(">", 2)[-2].split("<")[0])
        for line in svg.splitlines()
        if line.startswith("<text")
    ]
    assert text_labels[:40] == list(INV.symbols)      # column headers
    assert text_labels[40:80] == list(INV.symbols)    # row headers
    assert "&lt;eps&gt;" in svg  # epsilon label is XML-escaped


def test_table2_profile_darkest_cells():
    from phonoscope import align

    from .conftest import idx, make_weighted_costs

    costs = make_weighted_costs(INV)
    profile = SpeakerProfile("s", ConfusionMatrix(INV))
    accumulate(profile, align(idx(INV, "HH IH Z"), idx(INV, "IY Z"), costs))
    svg = svg_heatmap(profile.matrix.counts, INV.symbols, per_row=True)
    eps = INV.epsilon_index
    assert cell_fill(svg, INV.index("HH"), eps) == "#000000"
    assert cell_fill(svg, INV.index("IH"), INV.index("IY")) == "#000000"
    assert cell_fill(svg, INV.index("Z"), INV.index("Z")) == "#000000"
    assert cell_fill(svg, INV.index("HH"), INV.index("IY")) == "#ffffff"


def test_svg_dimensions_cover_grid():
    svg = svg_heatmap(np.zeros((40, 40)), INV.symbols)
    first = svg.splitlines()[0]
    width = int(first.split('width="')[1].split('"')[0])
    assert width >= MARGIN_LEFT + 40 * CELL
