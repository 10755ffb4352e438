"""Exhaustive enumeration, subset counts, sifted counts, witness checking,
and density reports."""

import pytest

from conftest import naive_dead_ends, naive_is_squarefree, naive_q_count

from deadend import census
from deadend.arith import UnverifiableError, count_in_class
from deadend.census import (
    Checkpoint,
    DeadEndWitness,
    Refutation,
    density_report,
    enumerate_dead_ends,
    q_count,
    q_sifted,
    to_csv,
    to_text,
    verify_dead_end,
)
from deadend.euler import allowed_class_count, modulus
from deadend.local import DigitSet

# A large base-10 dead end: square-free, and every child n*10 + d has a small
# square divisor. The obstruction primes are checked digit by digit.
BIG_DEAD_END = 231546210170694222
BIG_OBSTRUCTION_PRIMES = (2, 11, 19, 7, 2, 5, 3, 13, 2, 17)


class TestEnumerate:
    @pytest.mark.parametrize("base", [2, 3])
    def test_matches_naive_enumeration(self, base):
        got: list[int] = []
        count = enumerate_dead_ends(base, 5000, emit=got.append)
        expected = naive_dead_ends(base, 5000)
        assert got == expected
        assert count == len(expected)

    def test_base2_first_values(self):
        got: list[int] = []
        enumerate_dead_ends(2, 200, emit=got.append)
        assert got == [22, 58, 62, 94, 122, 130, 166]

    def test_counts_at_1e5(self):
        assert enumerate_dead_ends(2, 10**5) == 4138
        assert enumerate_dead_ends(3, 10**5) == 939
        assert enumerate_dead_ends(4, 10**5) == 154
        assert enumerate_dead_ends(10, 10**5) == 0

    def test_no_base10_dead_end_below_1e6(self):
        assert enumerate_dead_ends(10, 10**6) == 0

    def test_emitted_ascending_unique(self):
        got: list[int] = []
        enumerate_dead_ends(2, 30000, emit=got.append)
        assert got == sorted(set(got))

    def test_limit_one(self):
        assert enumerate_dead_ends(2, 1) == 0

    def test_validates(self):
        with pytest.raises(ValueError):
            enumerate_dead_ends(2, 0)
        with pytest.raises(ValueError):
            enumerate_dead_ends(1, 10)


class TestQCount:
    def test_empty_subset_is_squarefree_count(self):
        assert q_count(DigitSet.empty(10), 10**6) == 607926

    def test_single_digit_frozen(self):
        assert q_count(DigitSet.from_digits(10, (1,)), 10**5) == 50499

    @pytest.mark.parametrize("base", [2, 3, 5, 10])
    def test_against_naive(self, base):
        import random

        rng = random.Random(base * 7 + 1)
        if 1 << base <= 8:
            masks = set(range(1 << base))
        else:
            masks = {0, (1 << base) - 1}
            while len(masks) < 6:
                masks.add(rng.randrange(1 << base))
        for mask in sorted(masks):
            subset = DigitSet(base, mask)
            digits = subset.digits
            assert q_count(subset, 10**4) == naive_q_count(base, digits, 10**4), (
                base,
                digits,
            )

    @pytest.mark.parametrize("base", [2, 3])
    def test_inclusion_exclusion_recovers_dead_ends(self, base):
        # sum over all subsets S of (-1)^|S| Q_S(X) counts dead ends exactly
        limit = 10**4
        total = 0
        for mask in range(1 << base):
            sign = -1 if bin(mask).count("1") % 2 else 1
            total += sign * q_count(DigitSet(base, mask), limit)
        assert total == enumerate_dead_ends(base, limit)

    def test_validates(self):
        with pytest.raises(ValueError):
            q_count(DigitSet.empty(10), 0)


class TestQSifted:
    def test_small_z_exact(self):
        # only p = 2 sieved: survivors of [1, X] are n != 0 mod 4
        X = 10**5
        assert q_sifted(DigitSet.empty(10), X, 2) == X - X // 4

    def test_matches_crt_class_expansion(self):
        # expand the survivor count as a sum over allowed classes mod M(5)
        X = 123_456
        for digits in [(), (0, 5), (1, 2, 3)]:
            subset = DigitSet.from_digits(10, digits)
            M = modulus(5)
            expected = 0
            for r in range(M):
                ok = True
                for q in (4, 9, 25):
                    if r % q == 0 or any((10 * r + d) % q == 0 for d in digits):
                        ok = False
                        break
                if ok:
                    expected += count_in_class(X, M, r)
            assert q_sifted(subset, X, 5) == expected, digits

    def test_density_tracks_allowed_fraction(self):
        # |Q_S(X; z) - X * G_z/M(z)| <= M(z) by periodicity
        X = 10**6
        subset = DigitSet.from_digits(10, (0, 5))
        M = modulus(5)
        g = allowed_class_count(subset, 5)
        assert abs(q_sifted(subset, X, 5) - X * g / M) <= M

    def test_sift_dominates_exact_count(self):
        # the congruence sieve only removes constraints for p <= z, so the
        # sifted count is an upper bound for Q_S(X)
        subset = DigitSet.from_digits(10, (1,))
        X = 10**4
        assert q_sifted(subset, X, 7) >= q_count(subset, X)

    def test_validates(self):
        with pytest.raises(ValueError):
            q_sifted(DigitSet.empty(10), 100, 1)
        with pytest.raises(ValueError):
            q_sifted(DigitSet.empty(10), 0, 5)


class TestVerify:
    def test_big_witness(self):
        result = verify_dead_end(10, BIG_DEAD_END)
        assert isinstance(result, DeadEndWitness)
        assert result.validate()
        assert tuple(ob.prime for ob in result.obstructions) == BIG_OBSTRUCTION_PRIMES
        assert all(ob.child == 10 * BIG_DEAD_END + ob.digit for ob in result.obstructions)

    def test_small_witness_base2(self):
        result = verify_dead_end(2, 22)
        assert isinstance(result, DeadEndWitness)
        assert result.validate()
        # children 44 = 2^2*11 and 45 = 3^2*5
        assert [ob.prime for ob in result.obstructions] == [2, 3]

    def test_refutes_non_squarefree(self):
        result = verify_dead_end(10, 4)
        assert isinstance(result, Refutation)
        assert "not square-free" in result.reason

    def test_refutes_squarefree_child(self):
        result = verify_dead_end(10, 5)
        assert isinstance(result, Refutation)
        assert result.digit == 1 and result.child == 51

    def test_refutes_base2(self):
        result = verify_dead_end(2, 1)
        assert isinstance(result, Refutation)

    def test_unverifiable_at_tiny_bound(self):
        with pytest.raises(UnverifiableError):
            verify_dead_end(10, BIG_DEAD_END, prime_bound=2)

    def test_all_enumerated_have_witnesses(self):
        found: list[int] = []
        enumerate_dead_ends(2, 500, emit=found.append)
        for n in found:
            result = verify_dead_end(2, n)
            assert isinstance(result, DeadEndWitness) and result.validate(), n

    def test_validates(self):
        with pytest.raises(ValueError):
            verify_dead_end(10, 0)


class TestDensityReport:
    def test_checkpoint_counts_match_enumeration(self):
        report = density_report(2, 3000, checkpoints=[1000, 2000])
        assert report.dead_end_count == enumerate_dead_ends(2, 3000)
        for cp in report.checkpoints:
            assert cp.count == enumerate_dead_ends(2, cp.x), cp

    def test_limit_checkpoint_appended(self):
        report = density_report(2, 3000, checkpoints=[1000])
        assert [cp.x for cp in report.checkpoints] == [1000, 3000]

    def test_counts_monotone(self):
        report = density_report(2, 50_000, checkpoints=[10_000, 20_000, 40_000])
        counts = [cp.count for cp in report.checkpoints]
        assert counts == sorted(counts)

    def test_default_checkpoints_are_decades(self):
        report = density_report(2, 10**5)
        assert [cp.x for cp in report.checkpoints] == [10**4, 10**5]

    def test_csv_shape(self):
        report = density_report(2, 2000, checkpoints=[1000])
        text = to_csv(report)
        lines = text.strip().split("\n")
        assert lines[0] == "x,count,density"
        assert len(lines) == 3
        x, count, density = lines[1].split(",")
        assert int(x) == 1000
        assert float(density) == pytest.approx(int(count) / 1000)

    def test_text_shape(self):
        report = density_report(2, 2000, checkpoints=[1000])
        text = to_text(report)
        for key in (
            "base: 2",
            "limit: 2000",
            "dead_end_count:",
            "empirical_density:",
            "constant:",
            "constant_err:",
            "checkpoints:",
        ):
            assert key in text, key
        assert text.count("- x:") == 2

    def test_checkpoint_density_property(self):
        assert Checkpoint(200, 3).density == pytest.approx(0.015)

    def test_validates_checkpoints(self):
        with pytest.raises(ValueError):
            density_report(2, 1000, checkpoints=[500, 200])
        with pytest.raises(ValueError):
            density_report(2, 1000, checkpoints=[2000])


class TestEnvironmentKnobs:
    def test_segment_size_does_not_change_counts(self, monkeypatch):
        monkeypatch.setenv("DEADEND_SEGMENT_BYTES", "8192")
        assert enumerate_dead_ends(2, 10**5) == 4138
        from deadend.arith import sieve_squarefree

        assert q_count(DigitSet.empty(10), 10**5) == sieve_squarefree(1, 10**5).count()

    def test_thread_count_does_not_change_counts(self, monkeypatch):
        got_serial: list[int] = []
        monkeypatch.setenv("DEADEND_THREADS", "1")
        monkeypatch.setenv("DEADEND_SEGMENT_BYTES", "16384")
        enumerate_dead_ends(2, 10**5, emit=got_serial.append)
        got_parallel: list[int] = []
        monkeypatch.setenv("DEADEND_THREADS", "4")
        enumerate_dead_ends(2, 10**5, emit=got_parallel.append)
        assert got_serial == got_parallel

    @pytest.mark.parametrize(
        "name,value",
        [
            ("DEADEND_SEGMENT_BYTES", "carrot"),
            ("DEADEND_SEGMENT_BYTES", "-5"),
            ("DEADEND_SEGMENT_BYTES", "100"),
            ("DEADEND_THREADS", "zero"),
            ("DEADEND_THREADS", "0"),
        ],
    )
    def test_malformed_env_rejected(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ValueError):
            enumerate_dead_ends(2, 10**4)
