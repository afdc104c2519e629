import numpy as np
import pandas as pd
import pytest

from tlnn.common.configurations import NetworkConfiguration, TrainConfiguration
from tlnn.common.errors import ValidationError
from tlnn.learner import (
    HISTORY_COLUMNS,
    ConvergenceMonitor,
    Placement,
    evaluate,
    maybe_add_neuron,
    place_neuron,
    prune_neurons,
    save_history,
    sgd_step,
    squared_error_cost,
    structure_cost,
    train,
    window_statistics,
)
from tlnn.logic import Always, Eventually, Predicate, eval_boolean
from tlnn.logic.formula import Comparison
from tlnn.network import Gradients, Mode, backward, forward
from tlnn.network.parameters import NeuronKind
from tlnn.signals.dataset import Dataset


def toy_config(**overrides):
    settings = dict(
        learning_rate=0.05,
        max_neurons=1,
        epochs=50,
        seed=3,
        network=NetworkConfiguration(hidden_width=4, initial_kind="always", initial_comparison=">="),
    )
    settings.update(overrides)
    return TrainConfiguration(**settings)


class TestUpdate:
    """Gradient descent step"""

    def test_zero_gradient_is_fixed_point(self, make_random_network, rng):
        params = make_random_network(rng)
        stepped = sgd_step(params, Gradients.zeros(params), 0.5)
        for name, array in params.named_arrays().items():
            assert np.array_equal(array, stepped.named_arrays()[name])

    def test_zero_learning_rate(self, make_random_network, rng):
        params = make_random_network(rng)
        _, trace = forward(params, rng.uniform(0.0, 1.0, params.length))
        stepped = sgd_step(params, backward(trace, params, 1), 0.0)
        for name, array in params.named_arrays().items():
            assert np.array_equal(array, stepped.named_arrays()[name])

    def test_scalar_update(self, make_neuron, make_network):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [1.0])
        grads = Gradients.zeros(params)
        grads.thresholds[0] = 2.0
        stepped = sgd_step(params, grads, 0.1)
        assert stepped.thresholds[0] == pytest.approx(0.8)
        assert params.thresholds[0] == 1.0

    def test_projection_keeps_weights_non_negative(self, make_neuron, make_network):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [0.0])
        grads = Gradients.zeros(params)
        grads.layer4[:] = 100.0
        grads.layer5[:] = 100.0
        stepped = sgd_step(params, grads, 0.5)
        assert stepped.layer4.min() == 0.0
        assert stepped.layer5.min() == 0.0

    def test_learning_rate_range(self, make_random_network, rng):
        params = make_random_network(rng)
        with pytest.raises(ValidationError):
            sgd_step(params, Gradients.zeros(params), 1.5)


class TestStructure:
    """Pruning and growth"""

    def test_prune_small_weights(self, make_neuron, make_network):
        neurons = [make_neuron("always", ">=", 8, 0, 7), make_neuron("eventually", "<", 8, 1, 3)]
        params = make_network(neurons, [0.0, 0.5], layer4=[[0.9, 0.3], [0.01, 0.2]])
        pruned = prune_neurons(params, 0.05)
        assert pruned.layer4.tolist() == [[0.9, 0.3], [0.0, 0.2]]
        assert pruned.neuron_count == 2

    def test_unchanged_above_threshold(self, make_neuron, make_network):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [0.0], layer4=[[0.5, 0.6]])
        assert prune_neurons(params, 0.05).layer4.tolist() == [[0.5, 0.6]]

    def test_disconnected_neuron_removed(self, make_neuron, make_network):
        neurons = [make_neuron("always", ">=", 8, 0, 7), make_neuron("eventually", "<", 8, 1, 3)]
        params = make_network(neurons, [0.0, 0.5], layer4=[[0.9, 0.3], [0.01, 0.02]])
        pruned = prune_neurons(params, 0.05)
        assert pruned.neuron_count == 1
        assert pruned.thresholds.tolist() == [0.0]

    def test_last_neuron_survives(self, make_neuron, make_network):
        neurons = [make_neuron("always", ">=", 8, 0, 7), make_neuron("eventually", "<", 8, 1, 3)]
        params = make_network(neurons, [0.0, 0.5], layer4=[[0.01, 0.0], [0.02, 0.03]])
        pruned = prune_neurons(params, 0.05)
        assert pruned.neuron_count == 1
        assert pruned.thresholds.tolist() == [0.5]
        assert pruned.layer4.tolist() == [[0.05, 0.05]]

    def test_last_neuron_keeps_disconnected_column(self, make_neuron, make_network):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [0.0], layer4=[[0.01, 0.0]])
        assert prune_neurons(params, 0.05).layer4.tolist() == [[0.05, 0.0]]

    def test_zero_threshold_keeps_outputs(self, make_random_network, make_neuron, make_network, rng):
        signals = Dataset.from_arrays(rng.uniform(0.0, 1.0, (10, 12)), [(-1, 1)[i % 2] for i in range(10)])
        params = make_random_network(rng)
        assert evaluate(prune_neurons(params, 0.0), signals) == evaluate(params, signals)
        neurons = [make_neuron("always", ">=", 12, 1, 3), make_neuron("eventually", "<", 12, 4, 2)]
        params = make_network(neurons, [0.4, 0.6], layer4=[[0.8, 0.5], [0.0, 0.0]])
        pruned = prune_neurons(params, 0.0)
        assert pruned.neuron_count == 1
        assert evaluate(pruned, signals) == evaluate(params, signals)

    def test_cost(self):
        assert squared_error_cost([1.0, 1.0], [1, -1]) == pytest.approx(2.0)
        assert squared_error_cost([1.0, -1.0], [1, -1]) == 0.0

    def test_structure_cost_uses_predicted_labels(self, make_neuron, make_network, toy_dataset):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [0.0])
        assert structure_cost(params, toy_dataset) == 0.0
        flipped = make_network([make_neuron("always", "<", 8, 0, 7)], [0.0])
        assert structure_cost(flipped, toy_dataset) == pytest.approx(4.0)
        half = Dataset.from_arrays([np.ones(8), np.ones(8)], [1, -1])
        assert structure_cost(params, half) == pytest.approx(2.0)

    def test_search_growth_rejects_accepted_negatives(self, make_neuron, make_network, toy_dataset, rng):
        params = make_network([make_neuron("always", "<", 8, 0, 7)], [2.0])
        assert evaluate(params, toy_dataset).error_rate == 0.5
        grown = maybe_add_neuron(params, toy_dataset, 0.5, rng, network=NetworkConfiguration(hidden_width=2),
                                 cost=2.0, placement="search")
        assert grown.neuron_count == 2
        assert grown.layer4[1].tolist() == [1.0, 1.0]
        assert evaluate(grown, toy_dataset).error_rate == 0.0

    def test_search_growth_needs_a_separating_atom(self, make_neuron, make_network, rng):
        params = make_network([make_neuron("always", "<", 8, 0, 7)], [2.0])
        dataset = Dataset.from_arrays([np.ones(8), np.ones(8)], [1, -1])
        assert maybe_add_neuron(params, dataset, 0.5, rng, cost=2.0, placement="search") is params

    def test_no_growth_below_threshold(self, make_neuron, make_network, toy_dataset, rng):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [0.0])
        assert maybe_add_neuron(params, toy_dataset, 0.5, rng, cost=0.0) is params

    def test_growth_above_threshold(self, make_neuron, make_network, toy_dataset, rng):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [0.0])
        grown = maybe_add_neuron(params, toy_dataset, 0.5, rng, network=NetworkConfiguration(nested_horizon=2),
                                 cost=2.0)
        assert grown.neuron_count == 2
        assert grown.layer4[1].tolist() == [1.0, 1.0]
        assert -1.0 <= grown.thresholds[1] <= 1.0

    def test_growth_capped(self, make_neuron, make_network, toy_dataset, rng):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [0.0])
        assert maybe_add_neuron(params, toy_dataset, 0.5, rng, max_neurons=1, cost=2.0) is params

    def test_growth_is_seeded(self, make_neuron, make_network, toy_dataset):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [0.0])
        network = NetworkConfiguration(nested_horizon=2)

        def kinds(seed):
            rng = np.random.default_rng(seed)
            grown = params
            for _ in range(4):
                grown = maybe_add_neuron(grown, toy_dataset, 0.5, rng, network=network, cost=2.0)
            return [n.kind for n in grown.neurons]

        assert kinds(21) == kinds(21)


def atom(placement, nested_horizon):
    predicate = Predicate(placement.comparison, placement.threshold)
    a, b = placement.start, placement.end
    if placement.kind is NeuronKind.ALWAYS:
        return Always(predicate, a, b)
    if placement.kind is NeuronKind.EVENTUALLY:
        return Eventually(predicate, a, b)
    if placement.kind is NeuronKind.ALWAYS_EVENTUALLY:
        return Always(Eventually(predicate, a, b), 0, nested_horizon)
    return Eventually(Always(predicate, a, b), 0, nested_horizon)


class TestPlacement:
    """Data-driven atom search"""

    def test_block_of_high_values(self):
        positives = [np.r_[np.zeros(4), np.ones(4), np.zeros(8)]] * 3
        negatives = [np.r_[np.zeros(4), np.full(4, 0.3), np.zeros(8)]] * 3
        placement = place_neuron(np.array(positives + negatives), [1] * 3 + [-1] * 3)
        assert isinstance(placement, Placement)
        assert (placement.kind, placement.comparison) == (NeuronKind.ALWAYS, Comparison.GE)
        assert (placement.start, placement.end) == (4, 7)
        assert placement.threshold == pytest.approx(0.65)
        assert placement.remaining == 0
        assert placement.gap == pytest.approx(0.7)

    def test_low_values_give_less_than(self):
        signals = np.array([np.full(8, 0.1)] * 2 + [np.full(8, 0.9)] * 2)
        placement = place_neuron(signals, [1, 1, -1, -1], kinds=[NeuronKind.EVENTUALLY])
        assert placement.comparison is Comparison.LT
        assert placement.threshold == pytest.approx(0.5)
        assert placement.width == 8

    def test_only_accepted_samples_count(self):
        signals = np.array([np.ones(8), np.zeros(8), np.ones(8)])
        labels = [1, -1, -1]
        assert place_neuron(signals, labels, accepted=[True, False, True]) is None
        assert place_neuron(signals, labels, accepted=[True, True, False]).remaining == 0
        assert place_neuron(signals, labels, accepted=[False, True, True]) is None

    @pytest.mark.parametrize("kind", list(NeuronKind))
    def test_atom_keeps_accepted_positives(self, kind):
        rng = np.random.default_rng(53)
        signals = rng.uniform(0.0, 1.0, (40, 16))
        labels = np.array([(-1, 1)[i % 2] for i in range(40)])
        signals[labels == 1, 5:9] += 0.5
        accepted = rng.random(40) < 0.8
        placement = place_neuron(signals, labels, accepted, kinds=[kind], nested_horizon=3)
        formula = atom(placement, 3)
        satisfied = np.array([eval_boolean(formula, x) for x in signals])
        assert satisfied[accepted & (labels == 1)].all()
        assert satisfied[accepted & (labels == -1)].sum() == placement.remaining
        assert placement.remaining < (accepted & (labels == -1)).sum()

    def test_nested_statistics(self):
        matrix = np.array([[0.0, 3.0, 1.0, 2.0, 0.0, 5.0]])
        assert window_statistics(matrix, NeuronKind.ALWAYS_EVENTUALLY, 2, 1).tolist() == [[3.0, 2.0, 2.0, 2.0]]
        assert window_statistics(matrix, NeuronKind.EVENTUALLY_ALWAYS, 2, 1).tolist() == [[1.0, 1.0, 1.0, 0.0]]
        assert window_statistics(matrix, NeuronKind.EVENTUALLY, 6).tolist() == [[5.0]]

    def test_signal_rows_checked(self):
        with pytest.raises(ValidationError):
            place_neuron(np.zeros((3, 4)), [1, -1])


class TestEvaluate:
    """Error rate and robustness"""

    def test_perfect_classification(self, make_neuron, make_network, toy_dataset):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [0.0])
        metrics = evaluate(params, toy_dataset)
        assert metrics.error_rate == 0.0
        assert metrics.predictions.tolist() == toy_dataset.labels.tolist()
        assert metrics.mean_robustness == pytest.approx(0.0, abs=1e-9)

    def test_single_misclassified_sample(self, make_neuron, make_network):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [0.0])
        dataset = Dataset.from_arrays([np.ones(8)], [-1])
        assert evaluate(params, dataset).error_rate == 1.0

    def test_zero_output_counts_as_positive(self, make_neuron, make_network):
        params = make_network([make_neuron("always", ">=", 8, 0, 7)], [0.0], layer5=(0.0, 0.0))
        dataset = Dataset.from_arrays([np.ones(8), -np.ones(8)], [1, -1])
        metrics = evaluate(params, dataset)
        assert metrics.robustness == pytest.approx((0.0, 0.0))
        assert metrics.error_rate == 0.5


class TestTrain:
    """End-to-end learning on small data"""

    def test_separable_toy_set(self, toy_dataset):
        params, history = train(toy_dataset, toy_config())
        assert evaluate(params, toy_dataset).error_rate == 0.0
        assert history[-1].error_rate == 0.0
        assert params.neuron_count == 1

    def test_zero_epochs(self, toy_dataset):
        params, history = train(toy_dataset, toy_config(epochs=0))
        assert history == []
        assert params.neuron_count == 1
        assert params.layer4.tolist() == [[1.0, 1.0]]

    def test_deterministic(self, toy_dataset):
        config = toy_config(epochs=5, max_neurons=3)
        first = train(toy_dataset, config)[1]
        second = train(toy_dataset, config)[1]
        assert [r.row() for r in first] == [r.row() for r in second]

    def test_history_columns(self, toy_dataset, tmp_path):
        _, history = train(toy_dataset, toy_config(epochs=3))
        assert [r.epoch for r in history] == [1, 2, 3]
        path = tmp_path / "history.csv"
        save_history(history, path)
        frame = pd.read_csv(path)
        assert tuple(frame.columns) == HISTORY_COLUMNS
        assert len(frame) == 3

    def test_early_stopping(self, toy_dataset):
        _, history = train(toy_dataset, toy_config(patience=2))
        assert len(history) < 50
        assert [r.error_rate for r in history[-2:]] == [0.0, 0.0]

    def test_growth_builds_a_conjunction(self):
        pattern = np.r_[np.ones(4), np.zeros(4)]
        signals = [pattern] * 4 + [np.ones(8)] * 4 + [np.zeros(8)] * 4
        dataset = Dataset.from_arrays(signals, [1] * 4 + [-1] * 8)
        config = TrainConfiguration(epochs=30, max_neurons=2, seed=5,
                                    network=NetworkConfiguration(hidden_width=4, nested_horizon=2))
        params, history = train(dataset, config)
        assert history[0].error_rate == pytest.approx(1 / 3)
        assert history[0].cost == pytest.approx(4 / 3)
        assert history[0].neurons == 2
        assert params.neuron_count == 2
        assert evaluate(params, dataset).error_rate == 0.0
        assert evaluate(params, dataset).error_rate <= min(r.error_rate for r in history)

    def test_random_placement(self, toy_dataset):
        params, history = train(toy_dataset, toy_config(epochs=3, placement="random"))
        assert [r.epoch for r in history] == [1, 2, 3]
        assert params.neuron_count == 1

    def test_loss_does_not_increase(self, toy_dataset):
        _, history = train(toy_dataset, toy_config(epochs=10, placement="random", patience=50))
        assert len(history) == 10
        assert history[-1].loss <= history[0].loss + 1e-12

    def test_search_places_the_first_neuron(self, toy_dataset):
        config = toy_config(epochs=1, network=NetworkConfiguration(hidden_width=4))
        _, history = train(toy_dataset, config)
        assert history[0].error_rate == 0.0
        assert history[0].cost == 0.0

    def test_validation_length_checked(self, toy_dataset):
        validation = Dataset.from_arrays([np.ones(4)], [1])
        with pytest.raises(ValidationError):
            train(toy_dataset, toy_config(epochs=1), validation)


class TestMonitor:
    """Report-by-exception convergence tracking"""

    def test_reports_only_state_changes(self):
        monitor = ConvergenceMonitor("inner", patience=2)
        assert monitor.process_epoch(True) is None
        message = monitor.process_epoch(True)
        assert message["converged"] is True
        assert monitor.converged
        assert monitor.process_epoch(True) is None
        message = monitor.process_epoch(False)
        assert message["converged"] is False
        assert not monitor.converged

    def test_never_converges_without_patience(self):
        monitor = ConvergenceMonitor("inner")
        for _ in range(10):
            assert monitor.process_epoch(True) is None
        assert not monitor.converged


def test_hard_mode_is_default_for_evaluation(make_neuron, make_network, toy_dataset):
    params = make_network([make_neuron("always", ">=", 8, 2.4, 3.3)], [0.0])
    hard = [forward(params, s.signal, Mode.HARD)[0] for s in toy_dataset]
    assert evaluate(params, toy_dataset).robustness == pytest.approx(tuple(hard))
