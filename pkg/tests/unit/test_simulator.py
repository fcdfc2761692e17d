import numpy as np
import pytest

from scalefuture.core.association import new_memory, normalize
from scalefuture.core.config import NormalizationAxis
from scalefuture.core.errors import ScenarioError
from scalefuture.core.future import predict_state
from scalefuture.core.laplace import new_state
from scalefuture.events.event_types import StimulusVocabulary, create_episode, create_sequence
from scalefuture.events.scenario import create_scenario
from scalefuture.events.simulator import (
    exposure_warnings,
    replay_episode,
    replay_stream,
    run_stream,
    sample_episode,
    sample_episodes,
    train,
    train_episodes,
    train_sequences,
)


def mass_peak(memory, present, past):
    return int(np.argmax(memory.slice(present, past) * memory.grid.taus))


class TestSampling:
    def test_single_branch_ignores_seed(self, fig4_scenario):
        for seed in (0, 1, 12345):
            episode = sample_episode(fig4_scenario, "beta", np.random.default_rng(seed))
            assert episode.stream.key() == ((0.0, "beta", 1.0), (10.0, "reward", 2.0))

    def test_branch_frequency(self, branching_scenario, rng):
        episodes = sample_episodes(branching_scenario, 10000, rng)
        share = np.mean([episode.branch == 0 for episode in episodes])
        assert share == pytest.approx(0.7, abs=0.015)
        delays = {episode.branch: episode.stream.events[1].time for episode in episodes}
        assert delays == {0: 5.0, 1: 15.0}

    def test_time_scale_stretches_delays(self, fig4_scenario, rng):
        episode = sample_episode(fig4_scenario.scaled(4.0), "alpha", rng)
        assert episode.stream.events[1].time == 20.0

    def test_episodes_follow_choice_order(self, fig4_scenario, rng):
        episodes = sample_episodes(fig4_scenario, 3, rng)
        assert [episode.choice for episode in episodes] == ["alpha"] * 3 + ["beta"] * 3

    def test_invalid_requests(self, fig4_scenario, rng):
        with pytest.raises(ScenarioError):
            sample_episode(fig4_scenario, "gamma", rng)
        with pytest.raises(ScenarioError):
            sample_episodes(fig4_scenario, 0, rng)


class TestLearnedAssociations:
    def test_fig4_predictions_peak_at_delays(self, fig4_scenario, grid, rng):
        memory = train(fig4_scenario, 1, grid, rng)
        M_bar = normalize(memory, axis=NormalizationAxis.EXPOSURE)
        assert abs(predict_state(M_bar, "alpha").peak_node("reward") - grid.nearest_node(5.0)) <= 1
        assert abs(predict_state(M_bar, "beta").peak_node("reward") - grid.nearest_node(10.0)) <= 1
        assert memory.presentations.tolist() == [1, 1, 2]
        assert memory.episodes_seen == 2

    def test_recent_predecessor_sits_closer(self, grid):
        vocab = StimulusVocabulary(("alpha", "beta", "gamma"))
        memory = replay_stream(create_sequence([(0, "alpha"), (3, "beta"), (8, "gamma")]), grid, vocab)
        from_beta = mass_peak(memory, "gamma", "beta")
        from_alpha = mass_peak(memory, "gamma", "alpha")
        assert from_beta < from_alpha
        assert abs(from_beta - grid.nearest_node(5.0)) <= 1
        assert abs(from_alpha - grid.nearest_node(8.0)) <= 1
        assert abs(mass_peak(memory, "beta", "alpha") - grid.nearest_node(3.0)) <= 1
        assert not memory.slice("alpha", "beta").any()

    def test_single_event_learns_nothing(self, grid, vocab):
        memory = replay_stream(create_sequence([(0, "alpha")]), grid, vocab)
        assert not memory.M.any()
        assert memory.presentations.tolist() == [1, 0, 0]

    def test_simultaneous_events_do_not_associate(self, grid, vocab):
        memory = replay_stream(create_sequence([(0, "alpha"), (0, "beta"), (5, "reward")]), grid, vocab)
        assert not memory.M[:, :2, :].any()
        assert memory.slice("reward", "alpha").any()
        np.testing.assert_array_equal(memory.slice("reward", "alpha"), memory.slice("reward", "beta"))

    def test_neutral_choice_predicts_nothing(self, grid, rng):
        scenario = create_scenario(
            states=["alpha", "beta", "food"],
            rewards={"food": 1.0},
            choices={
                "alpha": [{"p": 1.0, "outcomes": []}],
                "beta": [{"p": 1.0, "outcomes": [{"state": "food", "delay": 10.0}]}],
            },
        )
        memory = train(scenario, 2, grid, rng)
        assert not memory.M[:, :, 0].any()
        assert memory.slice("food", "beta").any()


class TestDeterminism:
    def test_same_seed_same_tensor(self, branching_scenario, grid):
        a = train(branching_scenario, 50, grid, np.random.default_rng(7))
        b = train(branching_scenario, 50, grid, np.random.default_rng(7))
        assert a.equals(b)

    def test_workers_do_not_change_bits(self, branching_scenario, grid):
        episodes = sample_episodes(branching_scenario, 40, np.random.default_rng(3))
        serial = train_episodes(episodes, grid, branching_scenario.vocab, workers=1)
        pooled = train_episodes(episodes, grid, branching_scenario.vocab, workers=4)
        assert serial.equals(pooled)


class TestAccumulation:
    def test_episodes_are_independent(self, grid, vocab):
        first = create_episode("alpha", [(5.0, "reward", 1.0)])
        second = create_episode("beta", [(10.0, "reward", 2.0)])
        trained = train_episodes([first, second], grid, vocab)
        expected = new_memory(grid, vocab)
        expected.merge(replay_episode(first, grid, vocab))
        expected.merge(replay_episode(second, grid, vocab))
        assert trained.equals(expected)
        assert not trained.slice("alpha", "beta").any()
        assert not trained.slice("beta", "reward").any()

    def test_training_order_does_not_matter(self, grid, branching_scenario, rng):
        episodes = sample_episodes(branching_scenario, 6, rng)
        a, b = episodes[::2], episodes[1::2]
        vocab = branching_scenario.vocab
        forward = train_episodes(a + b, grid, vocab)
        backward = train_episodes(b + a, grid, vocab)
        np.testing.assert_allclose(forward.M, backward.M, rtol=1e-12, atol=1e-15)
        np.testing.assert_array_equal(forward.presentations, backward.presentations)
        assert forward.episodes_seen == backward.episodes_seen

        merged = train_episodes(b, grid, vocab).merge(train_episodes(a, grid, vocab))
        np.testing.assert_allclose(merged.M, forward.M, rtol=1e-12, atol=1e-15)

    def test_dense_stepping_matches_event_updates(self, grid, vocab):
        memory = replay_stream(create_sequence([(0, "alpha"), (5, "reward")]), grid, vocab)
        state = new_state(grid, vocab).inject("alpha")
        for _ in range(50):
            state.decay(0.1)
        dense = new_memory(grid, vocab).hebbian_update(vocab.one_hot("reward"), state.invert())
        np.testing.assert_allclose(memory.M, dense.M, rtol=1e-9, atol=1e-12)

    def test_learning_rate(self, grid, vocab):
        stream = create_sequence([(0, "alpha"), (5, "reward")])
        unit = replay_stream(stream, grid, vocab)
        half = replay_stream(stream, grid, vocab, rate=0.5)
        np.testing.assert_allclose(half.M, 0.5 * unit.M, rtol=1e-15)

    def test_replayed_tensors_are_private_copies(self, grid, vocab):
        stream = create_sequence([(0, "alpha"), (5, "reward")])
        first = replay_stream(stream, grid, vocab)
        first.M[:] = 0.0
        assert replay_stream(stream, grid, vocab).M.any()

    def test_train_sequences_sums_streams(self, grid, vocab):
        streams = [
            create_sequence([(0, "alpha"), (5, "reward")]),
            create_sequence([(0, "alpha"), (5, "reward")]),
        ]
        memory = train_sequences(streams, grid, vocab)
        single = replay_stream(streams[0], grid, vocab)
        np.testing.assert_array_equal(memory.M, 2.0 * single.M)
        assert memory.episodes_seen == 2


class TestRunStream:
    def test_bank_at_stop_time(self, grid, vocab):
        stream = create_sequence([(0, "alpha"), (5, "reward")])
        state = run_stream(stream, grid, vocab, until=7.0)
        assert state.now == 7.0
        np.testing.assert_allclose(state.F[:, 0], np.exp(-grid.s_values * 7.0), rtol=1e-12)
        np.testing.assert_allclose(state.F[:, 2], np.exp(-grid.s_values * 2.0), rtol=1e-12)

    def test_events_after_stop_are_ignored(self, grid, vocab):
        stream = create_sequence([(0, "alpha"), (5, "reward")])
        state = run_stream(stream, grid, vocab, until=3.0)
        assert state.now == 3.0
        assert not state.F[:, 2].any()


class TestExposure:
    def test_equal_counts(self, fig4_scenario, grid, rng):
        memory = train(fig4_scenario, 2, grid, rng)
        assert exposure_warnings(memory, fig4_scenario.labels) == []

    def test_unequal_counts(self, grid, vocab):
        memory = train_sequences(
            [create_sequence([(0, "alpha")]), create_sequence([(0, "alpha")]), create_sequence([(0, "beta")])],
            grid,
            vocab,
        )
        warnings = exposure_warnings(memory, ("alpha", "beta"))
        assert warnings == ["unequal exposure counts: alpha=2, beta=1"]
