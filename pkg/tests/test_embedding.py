from __future__ import annotations

import json

import numpy as np
import pytest

from aspectnews.embedding import (
    FileBackedEmbedder,
    TrigramHashEmbedder,
    embed_section,
    split_sentences,
    title_group_vector,
)
from aspectnews.clustering import cosine

from oracles import oracle_trigram_cosine

provider = TrigramHashEmbedder()


class TestSplitSentences:
    def test_two_terminal_marks(self):
        assert split_sentences("Hij kwam. Zij ging.") == ["Hij kwam.", "Zij ging."]

    def test_abbreviation_guard(self):
        assert split_sentences("Dhr. Frank sprak.", abbreviations={"dhr."}) == [
            "Dhr. Frank sprak."
        ]

    def test_shipped_guard_list_covers_dutch_abbreviations(self):
        assert split_sentences("Dhr. Frank sprak. Hij ging.") == [
            "Dhr. Frank sprak.",
            "Hij ging.",
        ]

    def test_empty(self):
        assert split_sentences("") == []
        assert split_sentences("   \n ") == []

    def test_question_and_exclamation(self):
        assert split_sentences("Wat nu? Geen idee! Goed.") == [
            "Wat nu?",
            "Geen idee!",
            "Goed.",
        ]

    def test_no_split_before_lowercase(self):
        assert split_sentences("dit is afkorting nr. twaalf, zie daar.") == [
            "dit is afkorting nr. twaalf, zie daar."
        ]

    def test_split_before_digit(self):
        assert split_sentences("Het jaar eindigde. 1945 begon.") == [
            "Het jaar eindigde.",
            "1945 begon.",
        ]

    def test_ellipsis_stays_in_sentence(self):
        assert split_sentences("Hij wachtte... Zij kwam.") == [
            "Hij wachtte...",
            "Zij kwam.",
        ]

    def test_non_whitespace_content_preserved(self):
        text = "Een zin.  Nog een zin! En   de laatste? Ja."
        joined = "".join(split_sentences(text))
        assert joined.replace(" ", "") == text.replace(" ", "")


class TestTrigramHashEmbedder:
    def test_single_trigram_has_one_bucket(self):
        v = provider.embed("abc")
        assert np.count_nonzero(v) == 1
        assert np.isclose(v.max(), 1.0)

    def test_short_text_is_single_token(self):
        v = provider.embed("ab")
        assert np.count_nonzero(v) == 1

    def test_empty_text_is_zero_vector(self):
        assert not np.any(provider.embed(""))
        assert not np.any(provider.embed("  \t "))

    def test_self_cosine_is_one(self):
        for text in ("politiek", "een langere zin met woorden", "ab"):
            assert cosine(provider.embed(text), provider.embed(text)) == pytest.approx(1.0)

    def test_unit_norm_or_zero(self):
        for text in ("", "x", "abc", "woorden en nog meer woorden"):
            norm = np.linalg.norm(provider.embed(text))
            assert norm == pytest.approx(0.0) or norm == pytest.approx(1.0)

    def test_case_and_whitespace_insensitive(self):
        a = provider.embed("Politieke  Carriere")
        b = provider.embed("politieke carriere")
        assert np.array_equal(a, b)

    def test_cosine_matches_trigram_count_oracle(self):
        # These two words happen to be collision-free at the default
        # dimension (their only shared bucket is the genuinely shared
        # trigram "iek"), so hashed cosine equals the brute-force
        # trigram-count cosine exactly; a wider table double-checks.
        a, b = "politiek", "muziek"
        expected = oracle_trigram_cosine(a, b)
        assert expected > 0.0  # the shared suffix makes them related
        for dim in (256, 4096):
            embedder = TrigramHashEmbedder(dimension=dim)
            got = cosine(embedder.embed(a), embedder.embed(b))
            assert got == pytest.approx(expected, abs=1e-12)

    def test_transform_stacks_rows(self):
        X = provider.transform(["abc", "def"])
        assert X.shape == (2, provider.dimension)

    def test_sklearn_params_roundtrip(self):
        e = TrigramHashEmbedder(dimension=64)
        assert e.get_params() == {"dimension": 64}
        assert TrigramHashEmbedder(**e.get_params()).name == e.name


class TestSectionEmbedding:
    def test_single_sentence_section_equals_sentence_vector(self):
        text = "Hij schreef romans."
        assert np.allclose(embed_section(text, provider), provider.embed(text))

    def test_two_identical_sentences_equal_one(self):
        one = embed_section("Hij schreef.", provider)
        two = embed_section("Hij schreef. Hij schreef.", provider)
        assert np.allclose(one, two)

    def test_three_sentence_mean_matches_recomputation(self):
        text = "Hij kwam aan. Zij vertrok snel. Iedereen wachtte."
        sentences = split_sentences(text)
        expected = np.mean([provider.embed(s) for s in sentences], axis=0)
        assert np.allclose(embed_section(text, provider), expected)

    def test_empty_section_is_zero(self):
        assert not np.any(embed_section("", provider))

    def test_mean_norm_at_most_one(self):
        v = embed_section("Een zin hier. Een andere zin daar. Nog een derde.", provider)
        assert np.linalg.norm(v) <= 1.0 + 1e-12


class TestTitleGroupVector:
    def test_single_section(self):
        text = "Hij werd geboren in 1900 en groeide op."
        assert np.allclose(
            title_group_vector([text], provider), embed_section(text, provider)
        )

    def test_copies_collapse(self):
        text = "Hij werd geboren."
        v = title_group_vector([text, text, text], provider)
        assert np.allclose(v, embed_section(text, provider))

    def test_mixed_group_matches_oracle(self):
        texts = ["Hij schreef boeken.", "Zij componeerde muziek.", "Korte tekst."]
        expected = np.mean([embed_section(t, provider) for t in texts], axis=0)
        assert np.allclose(title_group_vector(texts, provider), expected)

    def test_empty_group_raises(self):
        with pytest.raises(ValueError, match="empty title group"):
            title_group_vector([], provider)


class TestFileBackedProvider:
    def test_interchangeable_with_reference(self, tmp_path):
        texts = ["Hij schreef.", "Zij ging weg.", "politieke carriere"]
        path = tmp_path / "vectors.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            for t in texts:
                fh.write(json.dumps({"text": t, "vector": list(provider.embed(t))}) + "\n")
        file_provider = FileBackedEmbedder(path)
        assert file_provider.dimension == provider.dimension
        for t in texts:
            assert np.allclose(file_provider.embed(t), provider.embed(t))

    def test_lookup_normalizes_whitespace(self, tmp_path):
        path = tmp_path / "vectors.jsonl"
        path.write_text(json.dumps({"text": "een  zin", "vector": [1.0, 0.0]}) + "\n")
        file_provider = FileBackedEmbedder(path)
        assert np.allclose(file_provider.embed(" een zin "), [1.0, 0.0])

    def test_missing_text_raises(self, tmp_path):
        path = tmp_path / "vectors.jsonl"
        path.write_text(json.dumps({"text": "a", "vector": [1.0]}) + "\n")
        with pytest.raises(KeyError):
            FileBackedEmbedder(path).embed("onbekend")
