import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sabeam import learn
from sabeam.learn import (ALL_BEAMS, ClassifierSpec, DecisionTree, GradientBoostingRegressor,
                          GradientBoostingSpec, LinearRegression, OlsSpec,
                          RandomForestClassifier, RandomForestRegressor, RandomForestSpec)


def make_xy(n=200, d=5, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-10, 10, (n, d))
    y = np.sin(X[:, 0]) * 5 + X[:, 1] ** 2 / 10 - X[:, 2] + rng.normal(0, 0.1, n)
    return X, y


class TestOls:
    def test_recovers_line(self):
        x = np.linspace(-3, 7, 40)[:, None]
        model = LinearRegression().fit(x, 2 * x[:, 0] + 1)
        assert abs(model.coef[0] - 2) < 1e-8 and abs(model.intercept - 1) < 1e-8

    def test_recovers_planted_model(self):
        rng = np.random.default_rng(1)
        X = rng.normal(0, 50, (300, 6))
        beta = rng.normal(0, 3, 6)
        y = X @ beta - 4.25
        model = LinearRegression().fit(X, y)
        assert np.abs(model.coef - beta).max() < 1e-8
        assert abs(model.intercept + 4.25) < 1e-8

    def test_residuals_orthogonal(self):
        X, y = make_xy()
        model = LinearRegression().fit(X, y)
        resid = y - model.predict(X)
        design = np.column_stack([X, np.ones(len(X))])
        assert np.abs(design.T @ resid).max() < 1e-6

    def test_constant_column_tolerated(self):
        X, y = make_xy()
        X[:, 3] = 1e4
        pred = LinearRegression().fit(X, y).predict(X)
        assert np.all(np.isfinite(pred))


class TestTree:
    def test_memorises_distinct_samples(self):
        rng = np.random.default_rng(3)
        X = rng.uniform(0, 1, (50, 4))
        y = rng.normal(0, 1, 50)
        tree = DecisionTree(min_leaf=1).fit(X, y)
        assert np.array_equal(tree.predict(X), y) or np.abs(tree.predict(X) - y).max() < 1e-12

    def test_forest_hook_memorises(self):
        rng = np.random.default_rng(4)
        X = rng.uniform(0, 1, (50, 3))
        y = rng.normal(-60, 5, 50)
        forest = RandomForestRegressor(1, None, 1, 1.0, seed=2, bootstrap=False).fit(X, y)
        assert np.sqrt(np.mean((forest.predict(X) - y) ** 2)) < 1e-12

    def test_constant_target(self):
        X, _ = make_xy(60)
        y = np.full(60, -42.5)
        for model in (DecisionTree(), RandomForestRegressor(5, seed=1),
                      GradientBoostingRegressor(5), LinearRegression()):
            pred = model.fit(X, y).predict(np.random.default_rng(0).normal(0, 100, (7, 5)))
            assert np.allclose(pred, -42.5, atol=1e-9)

    def test_depth_cap(self):
        X, y = make_xy()
        stump = DecisionTree(max_depth=1).fit(X, y)
        assert stump.node_count == 3
        assert len(np.unique(stump.predict(X))) == 2

    def test_threshold_at_midpoint(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        tree = DecisionTree(max_depth=1).fit(X, np.array([0.0, 0.0, 10.0, 10.0]))
        assert tree.nodes["threshold"][0] == 1.5

    def test_rejects_wrong_width(self):
        X, y = make_xy()
        tree = DecisionTree().fit(X, y)
        with pytest.raises(ValueError):
            tree.predict(X[:, :3])

    def test_round_trip_dict(self):
        X, y = make_xy()
        tree = DecisionTree(max_depth=6, seed=3, feature_frac=0.5).fit(X, y)
        back = DecisionTree.from_dict(tree.to_dict())
        assert back.same_structure(tree)
        assert np.array_equal(back.predict(X), tree.predict(X))


def test_single_stage_boosting_equals_cart():
    X, y = make_xy(300, seed=7)
    y = y - 70.0
    gb = GradientBoostingRegressor(n_trees=1, depth=10_000, learning_rate=1.0).fit(X, y)
    cart = DecisionTree(max_depth=10_000, min_leaf=1, seed=gb.trees[0].seed).fit(X, y)
    assert gb.trees[0].same_structure(cart)
    Xq = np.random.default_rng(8).uniform(-12, 12, (500, 5))
    assert np.array_equal(gb.predict(Xq), cart.predict(Xq))
    assert np.array_equal(gb.predict(X), cart.predict(X))


class TestForest:
    def test_prediction_within_training_range(self):
        X, y = make_xy()
        forest = RandomForestRegressor(20, seed=5).fit(X, y)
        pred = forest.predict(np.random.default_rng(1).uniform(-100, 100, (300, 5)))
        assert pred.min() >= y.min() - 1e-12 and pred.max() <= y.max() + 1e-12

    def test_mean_of_trees(self):
        X, y = make_xy()
        forest = RandomForestRegressor(15, seed=5).fit(X, y)
        assert np.allclose(forest.predict(X), forest.tree_predictions(X).mean(axis=0),
                           rtol=0, atol=1e-12)

    def test_deterministic_and_worker_independent(self):
        X, y = make_xy()
        a = RandomForestRegressor(10, seed=9).fit(X, y).predict(X)
        b = RandomForestRegressor(10, seed=9, workers=3).fit(X, y).predict(X)
        c = RandomForestRegressor(10, seed=10).fit(X, y).predict(X)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_boosting_improves_training_fit(self):
        X, y = make_xy()
        few = GradientBoostingRegressor(5).fit(X, y).predict(X)
        many = GradientBoostingRegressor(100).fit(X, y).predict(X)
        assert np.mean((many - y) ** 2) < np.mean((few - y) ** 2)


class TestClassifier:
    def test_separable_classes(self):
        rng = np.random.default_rng(2)
        X = rng.uniform(0, 3, (300, 2))
        labels = np.floor(X[:, 0]).astype(int) * 10 + 7
        clf = RandomForestClassifier(10, seed=1, feature_frac=1.0).fit(X, labels)
        assert np.mean(clf.predict(X) == labels) > 0.97
        assert set(np.unique(clf.predict(X))) <= {7, 17, 27}

    def test_vote_tie_goes_to_lowest_label(self):
        X = np.array([[0.0], [1.0]])
        clf = RandomForestClassifier(2, seed=0, classes=[3, 9])
        clf.fit(X, np.array([9, 3]))
        one = DecisionTree(n_classes=2).fit(X, np.array([1.0, 1.0]))
        zero = DecisionTree(n_classes=2).fit(X, np.array([0.0, 0.0]))
        clf.trees = [one, zero]
        assert clf.predict(X).tolist() == [3, 3]

    def test_unknown_label_rejected(self):
        with pytest.raises(ValueError):
            RandomForestClassifier(2, classes=[1, 2]).fit(np.zeros((3, 1)), [1, 2, 5])


class TestModels:
    def test_all_beam_target(self):
        X, y = make_xy(120)
        Y = np.column_stack([y, -y, y * 2])
        model = learn.fit(RandomForestSpec(n_trees=5, seed=1, target=ALL_BEAMS), X, Y)
        pred = learn.predict(model, X)
        assert pred.shape == (120, 3)
        assert model.target_dim == 3

    def test_predict_rejects_mismatch(self):
        X, y = make_xy(50)
        model = learn.fit(OlsSpec(), X, y)
        with pytest.raises(ValueError):
            learn.predict(model, X[:, :2])

    def test_classifier_outputs_valid_index(self):
        X, _ = make_xy(100)
        s = np.random.default_rng(0).integers(1, 65, 100)
        model = learn.fit(ClassifierSpec(n_trees=5, seed=2), X, s)
        pred = learn.predict(model, X)
        assert pred.min() >= 1 and pred.max() <= 64

    @pytest.mark.parametrize("spec", [
        OlsSpec(), RandomForestSpec(n_trees=4, seed=3), GradientBoostingSpec(n_trees=6, seed=3),
        ClassifierSpec(n_trees=4, seed=3), RandomForestSpec(n_trees=2, target=ALL_BEAMS)],
        ids=lambda s: s.kind)
    def test_save_load_round_trip(self, spec, tmp_path):
        X, y = make_xy(80)
        if isinstance(spec, ClassifierSpec):
            Y = np.random.default_rng(0).integers(1, 65, 80)
        elif spec.target == ALL_BEAMS:
            Y = np.column_stack([y, y + 1])
        else:
            Y = y
        model = learn.fit(spec, X, Y)
        learn.save_model(model, tmp_path / "m.json")
        back = learn.load_model(tmp_path / "m.json")
        assert back.spec == spec
        assert np.array_equal(learn.predict(back, X), learn.predict(model, X))

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            GradientBoostingSpec(learning_rate=0.0)
        with pytest.raises(ValueError):
            RandomForestSpec(n_trees=0)
        with pytest.raises(ValueError):
            OlsSpec(target="nope")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 60), st.integers(1, 4))
def test_tree_leaves_respect_min_leaf(seed, n, min_leaf):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 3))
    y = rng.normal(size=n)
    tree = DecisionTree(min_leaf=min_leaf, seed=seed).fit(X, y)
    leaves = tree.predict(X)
    _, counts = np.unique(leaves, return_counts=True)
    # distinct leaves could share a value only by coincidence of means
    assert counts.min() >= min_leaf or tree.node_count == 1


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys
    env = dict(os.environ, SABEAM_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from sabeam.learn import BACKEND; print(BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
