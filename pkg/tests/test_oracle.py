import random

import pytest

from coordsolve import (
    Async,
    Partition,
    PreconditionError,
    ResourceLimitError,
    Sync,
    enumerate_equilibria,
    iesds,
    mask_of,
    members,
    support_strategy,
    table_game,
)
from coordsolve.oracle import _sync_histories, _verify_mspne
from coordsolve.sync import SyncSolver

from util import (
    cross_pairs_game,
    free_rider_game,
    mixed_two_player_game,
    random_game,
    spillover_pair_games,
    two_triangles_game,
)


# -- counterexample reproductions -------------------------------------------------


def test_mixed_game_commitment_flips_outcome():
    game = mixed_two_player_game()
    outs = enumerate_equilibria(game, Sync(2), mode="mspne")
    assert outs == {mask_of((0, 1))}


def test_free_rider_game_has_no_least():
    outs = enumerate_equilibria(free_rider_game(), Sync(2), mode="mspne")
    assert outs == {mask_of((0, 2)), mask_of((1, 2))}
    minimal = {
        o for o in outs if not any(p != o and p & ~o == 0 for p in outs)
    }
    assert minimal == outs  # two minimal outcomes, hence no least element


def test_cross_pairs_spne_vs_mspne():
    game = cross_pairs_game()
    spne = enumerate_equilibria(game, Sync(2), mode="spne")
    mspne = enumerate_equilibria(game, Sync(2), mode="mspne")
    assert spne == {mask_of((0, 1)), game.all_players}
    assert mspne == {game.all_players}


def test_spillover_perturbation_prunes_spne():
    plain, perturbed = spillover_pair_games()
    full = plain.all_players
    assert enumerate_equilibria(plain, Sync(3), mode="spne") == {
        mask_of((0, 1, 2)),
        full,
    }
    assert enumerate_equilibria(perturbed, Sync(3), mode="spne") == {full}


def test_async_spne_outside_stage_equilibria():
    # dominant-1 leader, follower pair mirrors him: a non-Nash SPNE outcome
    def pay(i, X):
        a = [(X >> k) & 1 for k in range(3)]
        if i == 0:
            return a[0] + a[1] + a[2]
        if i == 1:
            return a[1] * (2 * a[2] - 1)
        return a[2] * (2 * a[1] - 1)

    game = table_game([[pay(i, X) for X in range(8)] for i in range(3)])
    p = Partition([1 << 0, mask_of((1, 2))])
    least, _ = iesds(game)
    assert least == 1 << 0  # the leader's action 1 is strictly dominant
    spne = enumerate_equilibria(game, Async(p), mode="spne")
    assert mask_of((1, 2)) in spne  # followers punish the pledge: not a stage NE
    mspne = enumerate_equilibria(game, Async(p), mode="mspne")
    assert mspne <= spne
    assert all(o & (1 << 0) for o in mspne)  # monotone threats cannot deter him


# -- schedules and caps -----------------------------------------------------------


def test_sync_history_counts():
    stages = _sync_histories(3, 3)
    assert [len(s) for s in stages] == [1, 8, 27]


def test_budget_cap_raises():
    game = random_game(random.Random(1), 4)
    with pytest.raises(ResourceLimitError):
        enumerate_equilibria(game, Sync(3), budget=50)


def test_bad_schedule_arguments():
    game = mixed_two_player_game()
    with pytest.raises(ValueError):
        enumerate_equilibria(game, Sync(0))
    with pytest.raises(ValueError):
        enumerate_equilibria(game, "later", mode="mspne")
    with pytest.raises(ValueError):
        enumerate_equilibria(game, Sync(2), mode="trembling")


# -- invariants -------------------------------------------------------------------


def test_mspne_within_spne():
    rng = random.Random(2)
    for _ in range(10):
        game = random_game(rng, 3)
        for T in (1, 2):
            spne = enumerate_equilibria(game, Sync(T), mode="spne")
            mspne = enumerate_equilibria(game, Sync(T), mode="mspne")
            assert mspne <= spne


def test_spne_outcomes_survive_iterated_dominance():
    rng = random.Random(3)
    for _ in range(10):
        game = random_game(rng, 3)
        least, greatest = iesds(game)
        for o in enumerate_equilibria(game, Sync(2), mode="spne"):
            assert least & ~o == 0
            assert o & ~greatest == 0


def test_mspne_outcomes_shrink_with_horizon():
    rng = random.Random(4)
    for _ in range(8):
        game = random_game(rng, 3)
        prev = None
        for T in (1, 2, 3):
            cur = enumerate_equilibria(game, Sync(T), mode="mspne")
            if prev is not None:
                assert cur <= prev
            prev = cur


def test_every_mspne_has_a_no_pledge_twin():
    """Each equilibrium outcome is realized by a profile that never pledges
    early: stage-1 all-zero, middle stages echoing own pledges."""
    rng = random.Random(5)
    full_checked = 0
    for _ in range(6):
        game = random_game(rng, 3)
        n, T = 3, 2
        full = game.all_players
        outs = enumerate_equilibria(game, Sync(T), mode="mspne")
        stages = _sync_histories(n, T)
        found = set()
        from itertools import product
        from coordsolve.core import submasks
        from coordsolve.oracle import StrategyProfile

        final_hists = stages[T - 1]
        per_hist = [
            [h[-1] | sub for sub in submasks(full & ~h[-1])] for h in final_hists
        ]
        for choice in product(*per_hist):
            moves = {(): 0}
            for h, a in zip(final_hists, choice):
                moves[h] = a
            prof = StrategyProfile(T=T, moves=moves, outcome=0)
            prof.outcome = prof.replay()
            ok, _ = _verify_mspne(game, T, prof)
            if ok:
                found.add(prof.outcome)
        assert found == outs
        full_checked += 1
    assert full_checked == 6


# -- support_strategy ---------------------------------------------------------------


def test_support_full_set_constant_profile():
    game = two_triangles_game()
    prof = support_strategy(game, 2, game.all_players)
    assert prof.outcome == game.all_players
    assert all(m == game.all_players for m in prof.moves.values())


def test_support_partial_outcome():
    game = two_triangles_game()
    X = mask_of((0, 1, 2))
    prof = support_strategy(game, 2, X)
    assert prof.outcome == X
    ok, why = _verify_mspne(game, 2, prof)
    assert ok, why


def test_support_empty_outcome():
    game = two_triangles_game()
    prof = support_strategy(game, 2, 0)
    assert prof.outcome == 0


def test_support_rejects_unachievable():
    game = two_triangles_game()
    with pytest.raises(PreconditionError):
        support_strategy(game, 3, mask_of((0, 1, 2)))  # at T=3 only N remains


def test_support_matches_solver_outcomes():
    rng = random.Random(6)
    for _ in range(6):
        game = random_game(rng, 3)
        solver = SyncSolver(game)
        for T in (1, 2):
            for X in solver.outcome_set(T):
                prof = support_strategy(game, T, X, solver=solver)
                assert prof.outcome == X
