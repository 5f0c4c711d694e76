import numpy as np

from fastslow.oracle import AxisBias, greedy_label, greedy_next_state
from fastslow.prediction import (
    EpochRecord,
    epochs_to_threshold,
    generate_dataset,
    run_action_experiment,
    run_state_experiment,
    write_series_csv,
)


class TestGenerateDataset:
    def test_deterministic_for_fixed_seed(self):
        a = generate_dataset(10, rng=123)
        b = generate_dataset(10, rng=123)
        assert np.array_equal(a.starts, b.starts)
        assert np.array_equal(a.goals, b.goals)
        for bias in AxisBias:
            assert np.array_equal(a.action_labels[bias], b.action_labels[bias])

    def test_labels_match_teacher_for_every_pair(self):
        data = generate_dataset(10, rng=7)
        for bias in AxisBias:
            for i in range(len(data.starts)):
                s, g = tuple(data.starts[i]), tuple(data.goals[i])
                assert data.action_labels[bias][i] == int(greedy_label(s, g, bias))
                assert tuple(data.state_labels[bias][i]) == greedy_next_state(s, g, bias)

    def test_start_may_equal_goal(self):
        # P(no collision in 1000 draws) ~ (1 - 1/100)^1000 ~ 4e-5 per seed
        for seed in range(5):
            data = generate_dataset(10, rng=seed)
            assert np.any(np.all(data.starts == data.goals, axis=1))

    def test_bias_flip_changes_only_two_axis_pairs(self):
        data = generate_dataset(10, rng=11)
        changed = data.action_labels[AxisBias.X_FIRST] != data.action_labels[AxisBias.Y_FIRST]
        both_differ = np.all(data.starts != data.goals, axis=1)
        assert np.array_equal(changed, both_differ)


class TestExperiments:
    def test_action_experiment_structure(self):
        records = run_action_experiment(10, seed=0, epochs_per_phase=3)
        assert [r.epoch for r in records] == list(range(7))
        assert [r.phase for r in records] == [1, 1, 1, 1, 2, 2, 2]

    def test_untrained_accuracy_is_modal_class_share(self):
        # An untrained net predicts a near-constant class, so its accuracy
        # matches that class's share of the (unbalanced) teacher labels
        # rather than 1/num_classes.
        from fastslow.neural import MLP
        from fastslow.agent import derive_seed

        data = generate_dataset(10, rng=derive_seed(0, 70))
        net = MLP(heads=(5,), scale=9, rng=derive_seed(0, 72))
        x = net.encode_coords(data.starts, data.goals)
        predicted = net.forward_batch(x)[0].argmax(axis=1)
        labels = data.action_labels[AxisBias.X_FIRST]
        records = run_action_experiment(10, seed=0, epochs_per_phase=1)
        assert records[0].accuracy == np.mean(predicted == labels)
        assert records[0].accuracy < 0.5  # far below the converged level

    def test_state_experiment_chance_start(self):
        # next-state coordinate classes are near-uniform, so untrained
        # accuracy sits near 1/n per head
        records = run_state_experiment(10, seed=0, epochs_per_phase=2)
        assert abs(records[0].accuracy - 0.1) < 0.1

    def test_accuracy_improves_within_first_epochs(self):
        records = run_action_experiment(10, seed=1, epochs_per_phase=5)
        assert records[5].accuracy > records[0].accuracy + 0.2

    def test_deterministic_series(self):
        a = run_action_experiment(10, seed=4, epochs_per_phase=2)
        b = run_action_experiment(10, seed=4, epochs_per_phase=2)
        assert a == b


def test_epochs_to_threshold():
    records = [
        EpochRecord(0, 0.2, 1),
        EpochRecord(1, 0.5, 1),
        EpochRecord(2, 0.995, 1),
        EpochRecord(3, 0.99, 1),
        EpochRecord(4, 0.4, 2),
        EpochRecord(5, 0.7, 2),
        EpochRecord(6, 0.999, 2),
    ]
    assert epochs_to_threshold(records, phase=1) == 2
    assert epochs_to_threshold(records, phase=2) == 3
    assert epochs_to_threshold(records, phase=2, threshold=0.9999) is None


def test_write_series_csv(tmp_path):
    records = [EpochRecord(0, 0.25, 1), EpochRecord(1, 0.75, 1), EpochRecord(2, 0.5, 2)]
    path = tmp_path / "series.csv"
    write_series_csv(records, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "epoch,accuracy,phase"
    assert lines[1] == "0,0.250000,1"
    assert lines[3] == "2,0.500000,2"
