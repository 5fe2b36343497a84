import xml.etree.ElementTree as ET

import pytest

from boxpush.svgplot import (
    render_histogram,
    render_line_chart,
    render_scatter,
    write_svg,
)


def _valid_svg(text: str) -> bool:
    root = ET.fromstring(text)
    return root.tag.endswith("svg")


def test_line_chart_valid_svg():
    text = render_line_chart(
        [("spi", [0, 1, 2], [0.1, 0.5, 0.9]), ("random", [0, 1, 2], [0.1, 0.3, 0.7])],
        "t", "x", "y",
    )
    assert _valid_svg(text)
    assert "polyline" in text


def test_line_chart_rejects_empty():
    with pytest.raises(ValueError):
        render_line_chart([], "t", "x", "y")
    with pytest.raises(ValueError):
        render_line_chart([("a", [], [])], "t", "x", "y")


def test_histogram_valid_and_validated():
    text = render_histogram([("a", [1, 5, 2]), ("b", [2, 2, 2])], 0.0, 10.0,
                            "t", "x", "y")
    assert _valid_svg(text)
    with pytest.raises(ValueError):
        render_histogram([("a", [1, 2]), ("b", [1, 2, 3])], 0.0, 10.0, "t", "x", "y")
    with pytest.raises(ValueError):
        render_histogram([], 0.0, 10.0, "t", "x", "y")


def test_scatter_valid():
    text = render_scatter([(0.0, 1.0), (2.0, -3.5)], "t", "x", "y")
    assert _valid_svg(text)
    with pytest.raises(ValueError):
        render_scatter([], "t", "x", "y")


def test_byte_identical_output(tmp_path):
    series = [("a", [0, 1, 2, 3], [5.0, 1.0, 4.0, 2.0])]
    p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
    write_svg(render_line_chart(series, "t", "x", "y"), p1)
    write_svg(render_line_chart(series, "t", "x", "y"), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_title_is_escaped():
    text = render_line_chart([("a", [0, 1], [0, 1])], 'a<b>&"c', "x", "y")
    assert _valid_svg(text)
