from __future__ import annotations

import random
from collections import Counter

import numpy as np
import pytest

from aspectnews.classifier import (
    NEGATIVE,
    NearestCentroidTextClassifier,
    build_training_set,
    classify,
    evaluate,
    evaluate_predictions,
    softmax,
    train,
)
from aspectnews.embedding import TrigramHashEmbedder, embed_section
from aspectnews.clustering import cosine

from oracles import oracle_metrics, oracle_softmax
from synth import make_role_fixture, make_text, make_vocab

provider = TrigramHashEmbedder()


def fixture_training_set(aspect_counts=(10, 10, 10), seed=0):
    schema, pages, roles, clusters, vocabs, neg_vocab = make_role_fixture(
        aspect_counts, seed=seed
    )
    ts = build_training_set("synthrol", schema, pages, roles, seed, clusters)
    return ts, vocabs, neg_vocab


class TestBuildTrainingSet:
    def test_downsampling_and_negative_balance(self):
        schema, pages, roles, clusters, _, _ = make_role_fixture((250, 120, 100), seed=1)
        ts = build_training_set("synthrol", schema, pages, roles, 7, clusters)
        counts = Counter(label for _, label in ts.examples)
        assert counts["aspect-a"] == counts["aspect-b"] == counts["aspect-c"] == 100
        assert counts[NEGATIVE] == 300

    def test_split_sizes_480_60_60(self):
        schema, pages, roles, clusters, _, _ = make_role_fixture((250, 120, 100), seed=1)
        ts = build_training_set("synthrol", schema, pages, roles, 7, clusters)
        assert len(ts.splits.train) == 480
        assert len(ts.splits.validation) == 60
        assert len(ts.splits.test) == 60

    def test_splits_disjoint_and_covering(self):
        ts, _, _ = fixture_training_set()
        all_indices = [*ts.splits.train, *ts.splits.validation, *ts.splits.test]
        assert sorted(all_indices) == list(range(len(ts.examples)))

    def test_splits_stratified_by_label(self):
        ts, _, _ = fixture_training_set((20, 20, 20))
        train_labels = Counter(l for _, l in ts.labeled(ts.splits.train))
        assert train_labels == {"aspect-a": 16, "aspect-b": 16, "aspect-c": 16, NEGATIVE: 48}

    def test_same_seed_bit_identical(self):
        a, _, _ = fixture_training_set(seed=3)
        schema, pages, roles, clusters, _, _ = make_role_fixture((10, 10, 10), seed=3)
        b = build_training_set("synthrol", schema, pages, roles, 3, clusters)
        assert a == b

    def test_different_seed_same_label_counts(self):
        schema, pages, roles, clusters, _, _ = make_role_fixture((30, 20, 10), seed=5)
        a = build_training_set("synthrol", schema, pages, roles, 1, clusters)
        b = build_training_set("synthrol", schema, pages, roles, 2, clusters)
        assert a != b
        assert Counter(l for _, l in a.examples) == Counter(l for _, l in b.examples)

    def test_empty_negative_pool_raises(self):
        schema, pages, roles, clusters, _, _ = make_role_fixture((5, 5, 5), seed=0)
        only_role = [p for p in pages if roles[p.page_id]]
        with pytest.raises(ValueError, match="negative pool"):
            build_training_set("synthrol", schema, only_role, roles, 0, clusters)


class TestEstimator:
    def test_fit_predict_separable(self):
        rng = random.Random(0)
        va = make_vocab("abcdef", 10, rng)
        vb = make_vocab("ghijkl", 10, rng)
        X = [make_text(va, rng) for _ in range(8)] + [make_text(vb, rng) for _ in range(8)]
        y = ["a"] * 8 + ["b"] * 8
        clf = NearestCentroidTextClassifier(provider=provider).fit(X, y)
        assert list(clf.predict([make_text(va, rng), make_text(vb, rng)])) == ["a", "b"]

    def test_probabilities_sum_to_one(self):
        rng = random.Random(1)
        va = make_vocab("abcdef", 10, rng)
        clf = NearestCentroidTextClassifier(provider=provider).fit(
            [make_text(va, rng) for _ in range(4)] + ["iets anders hier"],
            ["a"] * 4 + ["b"],
        )
        proba = clf.predict_proba(["willekeurige tekst", make_text(va, rng)])
        assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)

    def test_missing_class_in_fit_raises(self):
        with pytest.raises(ValueError, match="degenerate"):
            NearestCentroidTextClassifier(provider=provider).fit(
                ["x"], ["a"], classes=["a", "b"]
            )

    def test_get_params(self):
        clf = NearestCentroidTextClassifier(provider=provider, temperature=5.0)
        params = clf.get_params()
        assert params["temperature"] == 5.0
        assert params["provider"] is provider


class TestTrainAndClassify:
    def test_separable_data_reaches_perfect_test_accuracy(self):
        ts, _, _ = fixture_training_set((40, 40, 40), seed=2)
        model = train(ts, provider)
        assert model.metrics.accuracy == 1.0
        assert model.metrics.macro_precision == 1.0
        assert model.metrics.macro_recall == 1.0

    def test_single_tau_grid_used(self):
        ts, _, _ = fixture_training_set((10, 10, 10))
        model = train(ts, provider, tau_grid=[42.0])
        assert model.temperature == 42.0

    def test_tau_choice_matches_bruteforce_oracle(self):
        ts, _, _ = fixture_training_set((12, 12, 12), seed=9)
        grid = [1.0, 10.0, 100.0]
        model = train(ts, provider, tau_grid=grid)

        # independent re-evaluation of every tau on the validation split
        train_ex = ts.labeled(ts.splits.train)
        centroids = {}
        for cls in ts.classes:
            vectors = [embed_section(t, provider) for t, l in train_ex if l == cls]
            centroids[cls] = np.mean(vectors, axis=0)
        val = ts.labeled(ts.splits.validation)
        best_tau, best_prec = None, -1.0
        for tau in sorted(grid):
            preds = []
            for text, _ in val:
                v = embed_section(text, provider)
                scores = [cosine(v, centroids[c]) for c in ts.classes]
                dist = oracle_softmax(scores, tau)
                preds.append(ts.classes[dist.index(max(dist))])
            prec = oracle_metrics([l for _, l in val], preds, ts.classes)["macro_precision"]
            if prec > best_prec:
                best_tau, best_prec = tau, prec
        assert model.temperature == best_tau

    def test_classify_distribution_matches_softmax_oracle(self):
        ts, vocabs, _ = fixture_training_set((10, 10, 10), seed=4)
        model = train(ts, provider, tau_grid=[10.0])
        text = make_text(vocabs[0], random.Random(99))
        label, dist = classify(model, text, provider)
        v = embed_section(text, provider)
        scores = [cosine(v, c) for c in model.centroids]
        expected = oracle_softmax(scores, model.temperature)
        for c, e in zip(model.classes, expected):
            assert dist[c] == pytest.approx(e, abs=1e-12)
        assert label == "aspect-a"
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-9)

    def test_empty_text_goes_negative_with_uniform(self):
        ts, _, _ = fixture_training_set((8, 8, 8))
        model = train(ts, provider)
        label, dist = classify(model, "", provider)
        assert label == NEGATIVE
        assert all(p == pytest.approx(1 / len(model.classes)) for p in dist.values())

    def test_label_invariant_under_text_duplication(self):
        # duplicated text has the same normalized embedding direction
        ts, vocabs, _ = fixture_training_set((10, 10, 10), seed=6)
        model = train(ts, provider)
        text = make_text(vocabs[1], random.Random(5), n_sentences=1)
        assert classify(model, text, provider)[0] == classify(
            model, text + " " + text, provider
        )[0]


class TestEvaluate:
    def test_all_correct_gives_ones(self):
        report = evaluate_predictions(["a", "b"], ["a", "b"], ["a", "b"])
        assert report.accuracy == 1.0
        assert report.macro_precision == 1.0
        assert report.macro_recall == 1.0
        assert report.macro_f1 == 1.0

    def test_two_class_confusion_arithmetic(self):
        # confusion [[8,2],[3,7]]
        y_true = ["a"] * 10 + ["b"] * 10
        y_pred = ["a"] * 8 + ["b"] * 2 + ["a"] * 3 + ["b"] * 7
        report = evaluate_predictions(y_true, y_pred, ["a", "b"])
        assert report.accuracy == pytest.approx(0.75)
        assert report.macro_precision == pytest.approx((8 / 11 + 7 / 9) / 2)
        assert report.confusion == {"a": {"a": 8, "b": 2}, "b": {"a": 3, "b": 7}}

    def test_never_predicted_class_scores_zero_precision(self):
        report = evaluate_predictions(["a", "b"], ["a", "a"], ["a", "b"])
        assert report.macro_precision == pytest.approx((1 / 2 + 0.0) / 2)

    def test_matches_oracle_on_random_predictions(self):
        rng = random.Random(13)
        classes = ["a", "b", "c", NEGATIVE]
        y_true = [rng.choice(classes) for _ in range(200)]
        y_pred = [rng.choice(classes) for _ in range(200)]
        report = evaluate_predictions(y_true, y_pred, classes)
        expected = oracle_metrics(y_true, y_pred, classes)
        assert report.macro_precision == pytest.approx(expected["macro_precision"], abs=1e-12)
        assert report.macro_recall == pytest.approx(expected["macro_recall"], abs=1e-12)
        assert report.macro_f1 == pytest.approx(expected["macro_f1"], abs=1e-12)
        assert report.accuracy == pytest.approx(expected["accuracy"], abs=1e-12)

    def test_evaluate_model_roundtrip(self):
        ts, vocabs, neg_vocab = fixture_training_set((10, 10, 10), seed=8)
        model = train(ts, provider)
        rng = random.Random(0)
        labeled = [(make_text(vocabs[0], rng), "aspect-a"), (make_text(neg_vocab, rng), NEGATIVE)]
        report = evaluate(model, labeled, provider)
        assert report.accuracy == 1.0

    def test_empty_sample_rejected(self):
        with pytest.raises(ValueError):
            evaluate_predictions([], [], ["a"])


class TestModelSerialization:
    def test_json_roundtrip(self):
        from aspectnews.classifier import TrainedAspectModel

        ts, _, _ = fixture_training_set((8, 8, 8))
        model = train(ts, provider)
        restored = TrainedAspectModel.from_dict(model.to_dict())
        assert restored.role == model.role
        assert restored.classes == model.classes
        assert restored.temperature == model.temperature
        assert np.allclose(restored.centroids, model.centroids)
        assert restored.metrics == model.metrics


class TestProviderInterchangeability:
    def test_file_backed_training_reproduces_reference(self, tmp_path):
        # precompute reference vectors for every sentence the pipeline
        # will embed; training through the file must be identical
        import json

        from aspectnews.embedding import FileBackedEmbedder, split_sentences

        ts, vocabs, _ = fixture_training_set((8, 8, 8), seed=12)
        probe = make_text(vocabs[2], random.Random(1))
        sentences = {s for text, _ in ts.examples for s in split_sentences(text)}
        sentences |= set(split_sentences(probe))
        path = tmp_path / "vectors.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            for s in sorted(sentences):
                fh.write(json.dumps({"text": s, "vector": list(provider.embed(s))}) + "\n")

        reference_model = train(ts, provider)
        file_model = train(ts, FileBackedEmbedder(path))
        assert np.array_equal(reference_model.centroids, file_model.centroids)
        assert reference_model.metrics == file_model.metrics
        ref_label, ref_dist = classify(reference_model, probe, provider)
        file_label, file_dist = classify(file_model, probe, FileBackedEmbedder(path))
        assert ref_label == file_label
        assert ref_dist == file_dist
