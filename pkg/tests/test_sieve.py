import math

import numpy as np
import pytest

from primepairs import (
    CacheError,
    ResourceLimitError,
    UsageError,
    build_table,
    is_prime_u64,
    load_table,
    pair_count_circular,
    pair_count_linear,
    pi_progression,
    residue_profile,
    save_table,
    twisted_progression_count,
    von_mangoldt_vector,
)
from primepairs.sieve import fnv1a64, load_or_build

import oracles


class TestBuildTable:
    def test_prime_counts(self, table_1e6):
        for x, expected in oracles.PI_VALUES.items():
            assert table_1e6.pi(x) == expected

    def test_tiny_extent(self):
        assert build_table(2).pi(2) == 1

    def test_bitmap_against_independent_sieve(self):
        t = build_table(50000)
        assert np.array_equal(t.is_prime, oracles.sieve_numpy_independent(50000))

    def test_bitmap_spans_segments(self):
        # extent just past one segment boundary exercises the segmented path
        n = (1 << 20) + 137
        t = build_table(n)
        ref = oracles.sieve_numpy_independent(n)
        assert np.array_equal(t.is_prime, ref)

    def test_random_samples_against_miller_rabin(self, table_1e6):
        rng = np.random.default_rng(2024)
        for x in rng.integers(1, table_1e6.n + 1, size=1000):
            assert bool(table_1e6.is_prime[x]) == is_prime_u64(int(x))

    def test_prefix_counts(self, table_10k):
        assert table_10k.is_prime[1] == False  # noqa: E712
        assert table_10k.is_prime[2] == True  # noqa: E712
        diffs = np.diff(table_10k.pi_prefix)
        assert np.all(diffs >= 0)
        assert table_10k.pi(table_10k.n) == int(np.count_nonzero(table_10k.is_prime))

    def test_memory_budget(self):
        with pytest.raises(ResourceLimitError):
            build_table(10**6, memory_budget=10**6)

    def test_extent_bounds(self):
        with pytest.raises(UsageError):
            build_table(1)
        with pytest.raises(ResourceLimitError):
            build_table(10**9 + 1)


class TestProgressionCounts:
    def test_examples_mod_3(self):
        t = build_table(30)
        assert pi_progression(t, 3, 1) == 3  # 7, 13, 19
        assert pi_progression(t, 3, 2) == 6  # 2, 5, 11, 17, 23, 29
        assert pi_progression(t, 3, 0) == 1  # only 3 itself

    def test_classes_partition_all_primes(self, table_10k):
        for q in range(1, 101):
            total = sum(pi_progression(table_10k, q, a) for a in range(q))
            assert total == table_10k.pi(table_10k.n)

    def test_profile_matches_progression(self, table_9240):
        for Q in (3, 30, 2310):
            profile = residue_profile(table_9240, Q)
            for a in range(0, Q, max(1, Q // 37)):
                assert profile.values[a] == pi_progression(table_9240, Q, a)

    def test_rejects_bad_residue(self, table_100):
        with pytest.raises(UsageError):
            pi_progression(table_100, 10, 10)


class TestPairCounts:
    def test_linear_examples(self, table_100):
        assert pair_count_linear(table_100, 2) == 8
        assert pair_count_linear(build_table(30), 2) == 5  # includes (29, 31)
        assert pair_count_linear(build_table(10), 6) == 2  # (5,11), (7,13)

    def test_linear_against_enumeration(self):
        for n in (10, 30, 97, 200):
            t = build_table(n)
            for two_k in (2, 4, 6, 12):
                if two_k <= n:
                    assert pair_count_linear(t, two_k) == oracles.pair_count_linear_naive(
                        n, two_k
                    ), (n, two_k)

    def test_circular_examples(self, table_100):
        assert pair_count_circular(build_table(30), 2) == 4  # (29,31) wraps to 1
        assert pair_count_circular(table_100, 2) == 8
        assert pair_count_circular(table_100, 0) == table_100.pi(100)

    def test_circular_against_enumeration(self):
        for n in (10, 30, 97, 120):
            t = build_table(n)
            for two_k in (0, 2, 6):
                assert pair_count_circular(t, two_k) == oracles.pair_count_circular_naive(
                    n, two_k
                ), (n, two_k)

    def test_linear_circular_gap_bounded_by_boundary_primes(self, table_10k):
        # only primes in (n-2k, n] can be paired differently by the two
        # counts, and each can flip either way: at n=1e4, 2k=30 the prime
        # 9973 pairs circularly (wraps to 3) but not linearly (10003 = 7*1429)
        n = table_10k.n
        for two_k in (2, 6, 12, 30):
            gap = pair_count_linear(table_10k, two_k) - pair_count_circular(table_10k, two_k)
            assert abs(gap) <= table_10k.pi(n) - table_10k.pi(n - two_k)


class TestVonMangoldt:
    def test_point_values(self):
        lam = von_mangoldt_vector(10)
        assert lam[8] == pytest.approx(math.log(2))
        assert lam[6] == 0.0
        assert lam[7] == pytest.approx(math.log(7))
        assert lam[1] == 0.0
        assert lam[9] == pytest.approx(math.log(3))

    def test_chebyshev_psi_near_n(self):
        lam = von_mangoldt_vector(10**6)
        assert 0.99 <= lam.sum() / 10**6 <= 1.01

    def test_budget(self):
        with pytest.raises(ResourceLimitError):
            von_mangoldt_vector(10**8 + 1)


class TestTwistedCounts:
    def test_zero_frequency_is_plain_count(self, table_9240):
        for Q, a in ((3, 1), (30, 7), (30, 0)):
            twisted = twisted_progression_count(table_9240, 0, Q, a)
            assert twisted == pytest.approx(pi_progression(table_9240, Q, a))
            assert twisted.imag == pytest.approx(0.0)

    def test_modulus_bounded_by_plain_count(self, table_9240):
        rng = np.random.default_rng(5)
        for _ in range(25):
            Q = int(rng.choice([3, 30, 2310]))
            a = int(rng.integers(0, Q))
            xi = int(rng.integers(0, table_9240.n))
            twisted = twisted_progression_count(table_9240, xi, Q, a)
            assert abs(twisted) <= pi_progression(table_9240, Q, a) + 1e-9

    def test_hand_value(self):
        # primes = 2 mod 3 up to 30 weighted by exp(-pi*i*x): 2 is even,
        # the five odd ones each contribute -1
        t = build_table(30)
        value = twisted_progression_count(t, 15, 3, 2)
        assert value.real == pytest.approx(-4.0, abs=1e-9)
        assert value.imag == pytest.approx(0.0, abs=1e-9)

    def test_profile_matches_single_counts(self, table_9240):
        profile = residue_profile(table_9240, 30, xi=77)
        for a in (0, 1, 7, 29):
            single = twisted_progression_count(table_9240, 77, 30, a)
            assert profile.values[a] == pytest.approx(single, abs=1e-9)

    def test_twisted_profile_at_zero_equals_untwisted(self, table_9240):
        plain = residue_profile(table_9240, 30).values
        twisted = residue_profile(table_9240, 30, xi=0).values
        assert np.allclose(twisted, plain, atol=1e-9)
        assert plain.sum() == table_9240.pi(table_9240.n)

    def test_requires_divisibility(self, table_100):
        with pytest.raises(UsageError):
            twisted_progression_count(table_100, 1, 30, 1)


class TestCache:
    def test_roundtrip(self, tmp_path):
        t = build_table(12345)
        path = save_table(t, tmp_path / "t.pspc")
        loaded = load_table(path)
        assert loaded.n == t.n
        assert np.array_equal(loaded.is_prime, t.is_prime)
        assert np.array_equal(loaded.pi_prefix, t.pi_prefix)
        assert loaded.checksum() == t.checksum()

    def test_corrupt_payload_detected(self, tmp_path):
        path = save_table(build_table(5000), tmp_path / "t.pspc")
        blob = bytearray(path.read_bytes())
        blob[20] ^= 0xFF
        path.write_bytes(bytes(blob))
        with pytest.raises(CacheError, match="checksum"):
            load_table(path)

    def test_bad_magic_detected(self, tmp_path):
        path = tmp_path / "junk.pspc"
        path.write_bytes(b"NOTAPRIMETABLE")
        with pytest.raises(CacheError):
            load_table(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(CacheError):
            load_table(tmp_path / "absent.pspc")

    def test_load_or_build_rebuilds_corrupt_cache(self, tmp_path):
        first = load_or_build(4000, tmp_path)
        path = tmp_path / "primetable_4000.pspc"
        blob = bytearray(path.read_bytes())
        blob[30] ^= 0x01
        path.write_bytes(bytes(blob))
        rebuilt = load_or_build(4000, tmp_path)
        assert np.array_equal(rebuilt.is_prime, first.is_prime)
        assert load_table(path).n == 4000

    def test_fnv_reference_value(self):
        # standard FNV-1a 64-bit test vector
        assert fnv1a64(b"") == 0xCBF29CE484222325
        assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
