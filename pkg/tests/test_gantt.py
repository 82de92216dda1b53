"""Gantt rendering against the worked two-processor schedules."""
from fractions import Fraction as F

import pytest

from chainsched import (
    ExampleInstance,
    InstallmentPlan,
    StructuralError,
    global_one_installment,
    improved_two_installment_schedule,
    simulate,
)
from chainsched.gantt import render_ascii, render_gantt, render_svg

from helpers import two_proc


def grid_of(line: str) -> str:
    return line.split("|")[1]


class TestAscii:
    def test_row_inventory_one_per_link_and_processor(self):
        text = render_ascii(global_one_installment(ExampleInstance(F(1, 2))))
        lines = text.splitlines()
        assert len(lines) == 4  # axis, link 1, P1, P2
        assert lines[1].startswith("link 1")
        assert lines[2].startswith("P1")
        assert lines[3].startswith("P2")

    def test_axis_carries_zero_and_the_makespan(self):
        text = render_ascii(global_one_installment(ExampleInstance(F(1, 2))))
        axis = text.splitlines()[0]
        assert axis.lstrip().startswith("0")
        assert axis.rstrip().endswith("7/10")

    def test_second_processor_idles_until_its_first_receive_ends(self):
        # receive of load 1 spans [0, 2/5]; makespan 7/10; width 60
        # floor((2/5) / (7/10) * 60) = floor(240/7) = 34
        text = render_ascii(global_one_installment(ExampleInstance(F(1, 2))))
        p2 = grid_of(text.splitlines()[3])
        assert set(p2[:34]) == {"."}
        assert p2[34] == "("

    def test_bars_carry_load_installment_labels(self):
        text = render_ascii(global_one_installment(ExampleInstance(F(1, 2))))
        link = grid_of(text.splitlines()[1])
        assert "(1,1)" in link and "(2,1)" in link
        p1 = grid_of(text.splitlines()[2])
        assert "(1,1)" in p1 and "(2,1)" in p1

    def test_improved_schedule_shows_four_comm_bars(self):
        text = render_ascii(improved_two_installment_schedule())
        link = grid_of(text.splitlines()[1])
        assert link.count("(") == 4
        for label in ("(1,1)", "(1,2)", "(2,1)", "(2,2)"):
            assert label in link

    def test_empty_share_renders_as_zero_width(self):
        platform, loads = two_proc(F(1, 2), n_loads=1)
        gamma = [[[F(1)]], [[F(0)]]]
        schedule = simulate(platform, loads, InstallmentPlan((1,)), gamma)
        text = render_ascii(schedule)
        assert set(grid_of(text.splitlines()[1])) == {"."}  # nothing sent
        assert set(grid_of(text.splitlines()[3])) == {"."}  # P2 never computes
        assert "(1,1)" in grid_of(text.splitlines()[2])

    def test_tiny_positive_bar_still_visible(self):
        platform, loads = two_proc(F(1, 2), n_loads=1)
        gamma = [[[F(999, 1000)]], [[F(1, 1000)]]]
        schedule = simulate(platform, loads, InstallmentPlan((1,)), gamma)
        link = grid_of(render_ascii(schedule).splitlines()[1])
        assert link != "." * len(link)

    def test_deterministic(self):
        s = improved_two_installment_schedule()
        assert render_ascii(s) == render_ascii(s)


class TestSvg:
    def test_structure_and_counts(self):
        svg = render_svg(global_one_installment(ExampleInstance(F(1, 2))))
        assert svg.startswith("<svg xmlns=")
        assert svg.count('<rect class="comm"') == 2
        assert svg.count('<rect class="comp"') == 4
        assert svg.rstrip().endswith("</svg>")

    def test_axis_ticks(self):
        svg = render_svg(global_one_installment(ExampleInstance(F(1, 2))))
        assert ">0</text>" in svg
        assert ">7/10</text>" in svg

    def test_linear_axis_receive_end_equals_compute_start(self):
        # t=2/5 of 7/10 maps to 70 + (4/7)*640 = 435.714...
        svg = render_svg(global_one_installment(ExampleInstance(F(1, 2))))
        comp_rects = [l for l in svg.splitlines() if 'class="comp"' in l]
        assert 'x="435.714"' in comp_rects[2]  # P2's load-1 bar
        comm_rects = [l for l in svg.splitlines() if 'class="comm"' in l]
        assert 'x="70.000" ' in comm_rects[0]
        assert 'width="365.714"' in comm_rects[0]

    def test_zero_width_rect_emitted_not_dropped(self):
        platform, loads = two_proc(F(1, 2), n_loads=1)
        gamma = [[[F(1)]], [[F(0)]]]
        schedule = simulate(platform, loads, InstallmentPlan((1,)), gamma)
        svg = render_svg(schedule)
        assert svg.count('width="0.000"') == 2  # the send and P2's compute
        assert svg.count('<rect class="comm"') == 1

    def test_deterministic(self):
        s = improved_two_installment_schedule()
        assert render_svg(s) == render_svg(s)


class TestDispatch:
    def test_formats(self):
        s = global_one_installment(ExampleInstance(F(2)))
        assert render_gantt(s, "ascii") == render_ascii(s)
        assert render_gantt(s, "svg") == render_svg(s)

    def test_unknown_format(self):
        s = global_one_installment(ExampleInstance(F(2)))
        with pytest.raises(StructuralError, match="png"):
            render_gantt(s, "png")
