import numpy as np
import pytest

from ttcgame import (
    Bid,
    DomainError,
    GameInstance,
    InvalidArgumentError,
    ProviderProfile,
    auction_equilibrium,
    dominant_bid,
    run_auction,
    verify_dominant_strategy,
)
from ttcgame.auction import price_grid
from helpers import worked_example_game, random_strict_game


def test_dominant_bids_worked_example():
    g = worked_example_game()
    b1 = dominant_bid(g.providers[0], 0)
    b2 = dominant_bid(g.providers[1], 1)
    assert (b1.level, b1.quality, b1.price) == (0, 1.4, 0.25)
    assert b1.value == pytest.approx(1.15, abs=1e-15)
    assert (b2.level, b2.quality, b2.price, b2.value) == (0, 1.0, 0.5, 0.5)


def test_single_level_dominant_bid():
    p = ProviderProfile("s", [0.8], [0.5], [0.3])
    assert dominant_bid(p) == Bid(0, 0, 0.8, 0.3)


def test_worked_exampleuction_outcome():
    bids, out = auction_equilibrium(worked_example_game())
    assert out.winner == 0
    assert out.payment == pytest.approx(0.9, abs=1e-12)
    assert out.winner_utility == pytest.approx(0.65, abs=1e-12)
    assert out.user_net_value == 0.5
    assert out.welfare == pytest.approx(1.15, abs=1e-12)
    assert out.ordering == (0, 1)
    assert out.utility(1) == 0.0


def test_equal_quality_cheaper_bid_wins():
    q, c, d = 2.0, 0.5, 0.25
    out = run_auction([Bid(0, 0, q, c), Bid(1, 0, q, c + d)], [c, c])
    assert out.winner == 0
    assert out.payment == c + d
    assert out.winner_utility == d


def test_winner_price_does_not_change_outcome():
    base = run_auction([Bid(0, 0, 2.0, 0.5), Bid(1, 0, 1.0, 0.5)], [0.25, 0.25])
    for p in [0.0, 0.3, 0.9, 1.4]:
        out = run_auction([Bid(0, 0, 2.0, p), Bid(1, 0, 1.0, 0.5)], [0.25, 0.25])
        assert (out.winner, out.payment, out.winner_utility, out.user_net_value, out.welfare) == (
            base.winner, base.payment, base.winner_utility, base.user_net_value, base.welfare
        )


def test_auction_errors():
    with pytest.raises(InvalidArgumentError):
        run_auction([Bid(0, 0, 1.0, 0.5)], [0.1])
    with pytest.raises(DomainError, match=r"\[0, 1\]"):
        run_auction([Bid(0, 0, 1.0, 0.5), Bid(1, 0, 0.75, 0.25)], [0.1, 0.1])
    with pytest.raises(InvalidArgumentError):
        Bid(0, 0, -1.0, 0.0)
    single = GameInstance((ProviderProfile("s", [1.0], [0.5], [0.25]),))
    with pytest.raises(InvalidArgumentError, match="≥ 2 providers"):
        auction_equilibrium(single)


def test_top_welfare_tie_is_an_error():
    a = ProviderProfile("a", [1.0], [0.5], [0.25])
    b = ProviderProfile("b", [1.25], [0.625], [0.5])
    with pytest.raises(DomainError):
        auction_equilibrium(GameInstance((a, b)))


def test_second_provider_can_win():
    a = ProviderProfile("a", [1.0], [0.5], [0.25])
    b = ProviderProfile("b", [2.0], [0.625], [0.5])
    _, out = auction_equilibrium(GameInstance((a, b)))
    assert out.winner == 1


def test_price_grid_shape():
    np.testing.assert_allclose(price_grid(1.0), [0.5, 0.999, 1.0, 1.001, 1.5])
    assert price_grid(0.0005).min() == 0.0


def test_verify_worked_example_provider():
    rep = verify_dominant_strategy(worked_example_game(), 0, [-1.0, 0.4, 0.5, 1.2])
    assert rep.ok and rep.checked > 0


def test_lower_welfare_level_while_winning_is_worse():
    g = worked_example_game()
    opp = Bid(1, 0, 1.0, 0.5)
    best = run_auction([dominant_bid(g.providers[0], 0), opp], [0.25, 0.5]).winner_utility
    dev = run_auction([Bid(0, 1, 1.8, 1.0), opp], [1.0, 0.5])
    assert dev.winner == 0 and dev.winner_utility < best


def test_underpricing_to_win_loses_money():
    # cost 1.0 cannot beat an opponent offering 1.2 truthfully; bidding below cost wins at a loss
    p = ProviderProfile("x", [2.0], [1.25], [1.0])
    out = run_auction([Bid(0, 0, 2.0, 0.7), Bid(1, 0, 2.2, 1.0)], [1.0, 0.5])
    assert out.winner == 0 and out.winner_utility < 0
    assert dominant_bid(p).value < 1.2


def test_random_outcome_invariants():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(2, 5))
        bids = [Bid(j, 0, float(rng.uniform(0, 3)), float(rng.uniform(0, 2))) for j in range(n)]
        costs = [float(rng.uniform(0, 1)) for _ in range(n)]
        out = run_auction(bids, costs)
        values = sorted((b.value for b in bids), reverse=True)
        w = bids[out.winner]
        assert out.user_net_value == values[1]
        assert out.payment > w.price
        assert out.winner_utility + out.user_net_value == pytest.approx(out.welfare, abs=1e-12)
        assert out.welfare == pytest.approx(w.quality - costs[out.winner], abs=1e-15)
