import numpy as np
import pytest

from boxpush.errors import FormatError, GenerationStallError
from boxpush.pool import (
    PdlMap,
    action_index_from_uniform,
    build_map,
    draw_key,
    expand_quad_row,
    feasible,
    generate_quad,
    key_from_uniform,
    load_map,
    sample_action,
    save_map,
    validate_pdl,
)


def test_validate_pdl_table_examples():
    assert validate_pdl([1 / 6] * 6) is None
    assert validate_pdl([1, 0, 0, 0, 0, 0]) is None
    assert validate_pdl([1 / 6, 1 / 6, 1 / 4, 1 / 4, 1 / 12, 1 / 12]) is None
    assert validate_pdl([1 / 7] * 6) is not None          # sums to 6/7
    assert validate_pdl([1 / 5] * 6) is not None          # sums to 6/5
    assert validate_pdl([1 / 4] * 4) is not None          # wrong length
    assert validate_pdl([0.5, 0.6, -0.1, 0, 0, 0]) is not None


def test_generate_quad_is_cyclic_right_shift(rng):
    quad = generate_quad(0.1, 0.3, rng)
    v = quad[0]
    assert list(quad[1]) == [v[3], v[0], v[1], v[2]]
    assert list(quad[2]) == [v[2], v[3], v[0], v[1]]
    assert list(quad[3]) == [v[1], v[2], v[3], v[0]]


def test_generate_quad_rows_sum_to_one(rng):
    for _ in range(50):
        quad = generate_quad(0.2, 0.1, rng)
        assert np.allclose(quad.sum(axis=1), 1.0, atol=1e-12)


def test_generate_quad_respects_cap_and_margin(rng):
    for _ in range(200):
        quad = generate_quad(0.1, 0.3, rng)
        v1, v3 = quad[0][0], quad[0][2]
        assert 0.0 <= v1 <= 0.1
        assert abs(v1 - v3) >= 0.3
        assert v3 >= 0.2  # with cap 0.1 the gap forces the opposite entry up


def test_generate_quad_parameter_validation(rng):
    with pytest.raises(ValueError):
        generate_quad(0.0, 0.3, rng)
    with pytest.raises(ValueError):
        generate_quad(1.1, 0.0, rng)
    with pytest.raises(ValueError):
        generate_quad(0.5, 1.0, rng)
    with pytest.raises(ValueError):
        generate_quad(0.5, 0.6, rng)  # margin + cap > 1


def test_generate_quad_stall_guard(rng):
    # margin this close to the feasibility edge is astronomically unlikely
    with pytest.raises(GenerationStallError):
        generate_quad(1e-9, 0.999999999, rng, max_retries=50)


def test_feasibility_predicate():
    assert feasible(0.1, 0.3)
    assert feasible(0.5, 0.5)
    assert not feasible(0.6, 0.5)
    assert not feasible(0.0, 0.1)


def test_expand_quad_row_examples():
    out = expand_quad_row([0.1, 0.2, 0.4, 0.3])
    assert np.allclose(out, [0.1, 0.1, 0.1, 0.4, 0.15, 0.15], atol=1e-12)
    out = expand_quad_row([0.25, 0.25, 0.25, 0.25])
    assert np.allclose(out, [0.25, 0.125, 0.125, 0.25, 0.125, 0.125], atol=1e-12)


def test_expand_quad_row_always_pairs_halves(rng):
    for _ in range(100):
        row = rng.random(4)
        out = expand_quad_row(row)
        assert out[1] == out[2] and out[4] == out[5]
        assert validate_pdl(out) is None


def test_expand_quad_row_rejects_bad_input():
    with pytest.raises(ValueError):
        expand_quad_row([0.0, 0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        expand_quad_row([0.5, -0.1, 0.4, 0.2])


def test_build_map_shapes_and_determinism():
    m1 = build_map(4000, 0.1, 0.3, seed=7)
    assert len(m1) == 4000
    m2 = build_map(4000, 0.1, 0.3, seed=7)
    assert np.array_equal(m1.pdls, m2.pdls)
    m3 = build_map(4000, 0.1, 0.3, seed=8)
    assert not np.array_equal(m1.pdls, m3.pdls)


def test_build_map_single_quad():
    m = build_map(4, 0.1, 0.3, seed=1)
    assert len(m) == 4
    assert all(validate_pdl(row) is None for row in m.pdls)


def test_build_map_validates_count():
    with pytest.raises(ValueError):
        build_map(10, 0.1, 0.3, seed=1)
    with pytest.raises(ValueError):
        build_map(0, 0.1, 0.3, seed=1)


def test_map_is_read_only(small_map):
    with pytest.raises(ValueError):
        small_map.pdls[0, 0] = 0.5


def test_map_opposing_axis_gap_survives_expansion(small_map):
    # the generation margin lands on the x pair for shifts 0 and 2 and on the
    # y pair for shifts 1 and 3; expansion and normalization preserve it
    arr = small_map.pdls
    gap_x = np.abs(arr[:, 0] - arr[:, 3])
    gap_y = np.abs(arr[:, 1] + arr[:, 2] - arr[:, 4] - arr[:, 5])
    even = np.arange(len(arr)) % 2 == 0
    assert np.all(gap_x[even] >= 0.3 - 1e-9)
    assert np.all(gap_y[~even] >= 0.3 - 1e-9)
    assert np.all(np.maximum(gap_x, gap_y) >= 0.3 - 1e-9)


def test_quad_rows_are_relabelings(small_map):
    arr = small_map.pdls
    for q in range(len(small_map) // 4):
        rows = arr[4 * q: 4 * q + 4]
        base = [rows[0][0], 2 * rows[0][1], rows[0][3], 2 * rows[0][4]]
        for i in range(4):
            got = [rows[i][0], 2 * rows[i][1], rows[i][3], 2 * rows[i][4]]
            expected = base[-i:] + base[:-i]
            assert np.allclose(got, expected, atol=1e-12)


def test_draw_key_range_and_degenerate(rng):
    assert draw_key(1, rng) == 0
    keys = {draw_key(10, rng) for _ in range(500)}
    assert keys <= set(range(10))
    assert len(keys) == 10
    with pytest.raises(ValueError):
        draw_key(0, rng)


def test_key_from_uniform_never_hits_size():
    eps_below_one = np.nextafter(1.0, 0.0)
    for size in (1, 3, 4000, 10**6):
        assert key_from_uniform(eps_below_one, size) == size - 1
        assert key_from_uniform(0.0, size) == 0


def test_shared_key_selects_same_pdl(small_map, rng):
    key = draw_key(len(small_map), rng)
    assert np.array_equal(small_map[key], small_map[key])


def test_sample_action_degenerate(rng):
    for _ in range(20):
        assert sample_action([1, 0, 0, 0, 0, 0], rng) == 1


def test_sample_action_uniform_frequencies(rng):
    n = 100_000
    pdl = [1 / 6] * 6
    counts = np.zeros(6)
    for _ in range(n):
        counts[sample_action(pdl, rng) - 1] += 1
    p = 1 / 6
    sigma = (n * p * (1 - p)) ** 0.5
    assert np.all(np.abs(counts - n * p) < 3 * sigma)


def test_sample_action_zero_mass_never_drawn(rng):
    pdl = [0.25, 0.25, 0.25, 0.0, 0.125, 0.125]
    for _ in range(2000):
        assert sample_action(pdl, rng) != 4


def test_sample_action_validates(rng):
    with pytest.raises(ValueError):
        sample_action([0.5, 0.5, 0.5, 0, 0, 0], rng)


def test_action_index_inverse_cdf():
    pdl = [0.1, 0.2, 0.3, 0.2, 0.1, 0.1]
    assert action_index_from_uniform(pdl, 0.05) == 0
    assert action_index_from_uniform(pdl, 0.1) == 1   # boundary goes right
    assert action_index_from_uniform(pdl, 0.95) == 5
    assert action_index_from_uniform(pdl, np.nextafter(1.0, 0.0)) == 5


def test_save_load_roundtrip(small_map, tmp_path):
    path = tmp_path / "map.txt"
    save_map(small_map, path)
    loaded = load_map(path)
    assert np.array_equal(loaded.pdls, small_map.pdls)
    assert (loaded.cap, loaded.margin, loaded.seed) == (
        small_map.cap, small_map.margin, small_map.seed
    )


def test_load_rejects_missing_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0.1 0.1 0.1 0.4 0.15 0.15\n")
    with pytest.raises(FormatError):
        load_map(path)


def test_load_rejects_bad_row(tmp_path, small_map):
    path = tmp_path / "map.txt"
    save_map(small_map, path)
    lines = path.read_text().splitlines()
    lines[3] = "0.5 0.5"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(FormatError) as err:
        load_map(path)
    assert err.value.line_no == 4


def test_load_rejects_invalid_pdl(tmp_path, small_map):
    path = tmp_path / "map.txt"
    save_map(small_map, path)
    lines = path.read_text().splitlines()
    lines[1] = "0.5 0.5 0.5 0.0 0.0 0.0"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError):
        load_map(path)


def test_pdlmap_validates_rows():
    bad = np.full((4, 6), 0.2)
    with pytest.raises(ValueError):
        PdlMap(pdls=bad, cap=0.1, margin=0.3, seed=0)
