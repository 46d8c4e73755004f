import numpy as np
import pytest

from combscan.raster import (PnmParseError, as_binary, as_gray, bin_and,
                             bin_not, bin_or, bin_sub, binary_to_gray,
                             load_pnm, save_pgm)


def rand_gray(rng, h, w):
    return rng.integers(0, 256, size=(h, w), dtype=np.uint8)


def rand_bin(rng, h, w):
    return rng.random((h, w)) < 0.5


class TestLoadPnm:
    def test_p5_verbatim(self):
        img = load_pnm(b"P5 2 1 255\x00\xff")
        assert img.shape == (1, 2)
        assert img.tolist() == [[0, 255]]

    def test_p6_white_luma(self):
        img = load_pnm(b"P6 1 1 255\n\xff\xff\xff")
        assert img.tolist() == [[255]]

    def test_p6_red_luma(self):
        # independent oracle: round(0.299*255 + 0.587*0 + 0.114*0) = 76
        img = load_pnm(b"P6 1 1 255\n\xff\x00\x00")
        assert img.tolist() == [[76]]

    def test_p6_luma_matches_pixel_oracle(self):
        rng = np.random.default_rng(7)
        rgb = rng.integers(0, 256, size=(5, 4, 3), dtype=np.uint8)
        data = b"P6 4 5 255\n" + rgb.tobytes()
        img = load_pnm(data)
        for y in range(5):
            for x in range(4):
                r, g, b = (int(v) for v in rgb[y, x])
                expect = int(np.floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5))
                assert img[y, x] == expect

    def test_header_comments_skipped(self):
        img = load_pnm(b"P5\n# a comment\n2 1\n# another\n255\n\x01\x02")
        assert img.tolist() == [[1, 2]]

    def test_bad_magic(self):
        with pytest.raises(PnmParseError, match="offset"):
            load_pnm(b"P3 1 1 255\n0")

    def test_truncated_payload(self):
        with pytest.raises(PnmParseError, match="truncated"):
            load_pnm(b"P5 4 4 255\n\x00\x00")

    def test_maxval_too_large(self):
        with pytest.raises(PnmParseError, match="maxval"):
            load_pnm(b"P5 1 1 65535\n\x00\x00")


class TestSavePgm:
    def test_minimal(self):
        assert save_pgm(np.zeros((1, 1), dtype=np.uint8)) == b"P5\n1 1\n255\n\x00"

    def test_round_trip_random(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            h, w = int(rng.integers(1, 9)), int(rng.integers(1, 9))
            img = rand_gray(rng, h, w)
            again = load_pnm(save_pgm(img))
            assert np.array_equal(img, again)


class TestBinaryAlgebra:
    def test_binary_to_gray(self):
        out = binary_to_gray(np.array([[0, 1]], dtype=np.uint8))
        assert out.tolist() == [[0, 255]]
        assert binary_to_gray(np.zeros((3, 3), bool)).max() == 0

    def test_threshold_inverts_binary_to_gray(self):
        from combscan.binarize import threshold_binary
        rng = np.random.default_rng(11)
        b = rand_bin(rng, 6, 7)
        for t in (0, 100, 254):
            assert np.array_equal(threshold_binary(binary_to_gray(b), t), b)

    def test_sub_self_is_empty(self):
        rng = np.random.default_rng(5)
        a = rand_bin(rng, 8, 8)
        assert not bin_sub(a, a).any()

    def test_or_identity(self):
        rng = np.random.default_rng(6)
        a = rand_bin(rng, 8, 8)
        assert np.array_equal(bin_or(a, np.zeros_like(a)), a)

    def test_de_morgan_and_difference_on_random_pairs(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            a, b = rand_bin(rng, 16, 16), rand_bin(rng, 16, 16)
            # oracle: plain pixel loop on a sample of positions
            lhs = bin_not(bin_and(a, b))
            rhs = bin_or(bin_not(a), bin_not(b))
            assert np.array_equal(lhs, rhs)
            assert np.array_equal(bin_sub(a, b), a & ~b)
            assert np.array_equal(bin_and(a, b), bin_and(b, a))
            assert np.array_equal(bin_or(a, b), bin_or(b, a))

    def test_inputs_not_mutated(self):
        a = np.ones((4, 4), dtype=bool)
        b = np.zeros((4, 4), dtype=bool)
        a0, b0 = a.copy(), b.copy()
        bin_and(a, b), bin_or(a, b), bin_sub(a, b), bin_not(a)
        assert np.array_equal(a, a0) and np.array_equal(b, b0)

    def test_shape_mismatch_names_both_shapes(self):
        a = np.zeros((2, 3), dtype=bool)
        b = np.zeros((3, 2), dtype=bool)
        with pytest.raises(ValueError, match=r"\(2, 3\).*\(3, 2\)"):
            bin_and(a, b)


class TestValidation:
    def test_as_gray_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            as_gray(np.array([[300]]))
        with pytest.raises(ValueError):
            as_gray(np.array([[-1]]))

    def test_as_binary_rejects_other_values(self):
        with pytest.raises(ValueError):
            as_binary(np.array([[2]]))

    def test_rejects_wrong_ndim(self):
        with pytest.raises(ValueError):
            as_gray(np.zeros(4, dtype=np.uint8))
