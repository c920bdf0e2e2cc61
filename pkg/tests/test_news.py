from __future__ import annotations

import random

import pytest

from aspectnews.embedding import TrigramHashEmbedder, split_sentences
from aspectnews.models import NewsArticle, PersonProfile, Snippet
from aspectnews.news import (
    classify_snippets,
    extract_snippets,
    filter_article,
    make_fragment,
    mention_count,
    partial_names,
    rank_top,
)
from aspectnews.classifier import build_training_set, train

from synth import make_role_fixture, make_text, make_vocab

provider = TrigramHashEmbedder()


def profile(full_name="Anne Frank", synonyms=(), birth=1929, death=1945):
    return PersonProfile(
        person_id="p1",
        full_name=full_name,
        synonyms=tuple(synonyms),
        birth_year=birth,
        death_year=death,
        roles=frozenset({"person"}),
    )


def article(text, date="1940-05-01", article_id="a1"):
    return NewsArticle(
        article_id=article_id,
        title="titel",
        text=text,
        date=date,
        newspaper="De Krant",
        external_url="https://archief.example/a1",
    )


class TestPartialNames:
    def test_simple_two_tokens(self):
        assert partial_names(profile("Anne Frank")) == {"Anne", "Frank"}

    def test_particles_removed(self):
        got = partial_names(profile("Wilhelmina van Oranje-Nassau"))
        assert got == {"Wilhelmina", "Oranje-Nassau"}

    def test_churchill(self):
        assert partial_names(profile("Winston Churchill")) == {"Winston", "Churchill"}

    def test_synonyms_contribute(self):
        got = partial_names(profile("Jannetje Schaft", synonyms=["Hannie Schaft"]))
        assert got == {"Jannetje", "Hannie", "Schaft"}

    def test_short_tokens_dropped(self):
        assert partial_names(profile("W Churchill")) == {"Churchill"}

    def test_all_particles_is_an_error(self):
        with pytest.raises(ValueError, match="unmatchable"):
            partial_names(profile("van der Den"), particles={"van", "der", "den"})


def dutch_dictionary(*extra):
    base = {
        "de", "het", "een", "artikel", "over", "politiek", "sprak", "gisteren",
        "avond", "lang", "in", "stad", "en", "hij", "zij", "was", "werd", "op",
        "naar", "met", "van", "voor", "veel", "mensen", "kwamen", "luisteren",
    }
    base.update(extra)
    return frozenset(base)


def make_ok_text(names="Anne Frank", n_words=120, mentions=3):
    # dictionary words only, plus the requested name mentions
    words = ["de", "politiek", "artikel", "over", "stad", "mensen"]
    body = [words[i % len(words)] for i in range(n_words - 2 * mentions)]
    for _ in range(mentions):
        body.extend(names.split())
    return " ".join(body)


class TestFilterArticle:
    def setup_method(self):
        self.profile = profile()
        self.dictionary = dutch_dictionary()

    def test_keeper(self):
        assert filter_article(article(make_ok_text()), self.profile, self.dictionary) is None

    def test_lifespan_reject(self):
        a = article(make_ok_text(), date="1950-01-01")
        assert filter_article(a, self.profile, self.dictionary) == "lifespan"

    def test_exactly_100_words_rejected(self):
        a = article(make_ok_text(n_words=100))
        assert filter_article(a, self.profile, self.dictionary) == "length"

    def test_101_words_kept(self):
        a = article(make_ok_text(n_words=101))
        assert filter_article(a, self.profile, self.dictionary) is None

    def test_ratio_below_090_rejected(self):
        # 89 of 100 alphabetic tokens in the dictionary
        text = " ".join(["politiek"] * 89 + ["xqzw"] * 11)
        a = article(text + " " + "Anne Frank " * 3)
        # name tokens are alphabetic too; build exactly: 89 dict + 11 junk
        text = " ".join(["politiek"] * 86 + ["xqzw"] * 8 + ["Anne", "Frank"] * 3)
        a = article(text)
        ratio_tokens = 86 + 8 + 6
        assert (86 / ratio_tokens) < 0.9
        assert filter_article(a, self.profile, self.dictionary) == "ocr"

    def test_ratio_exactly_090_kept(self):
        # 108 of 120 tokens in dictionary = 0.90 exactly
        dictionary = dutch_dictionary("anne", "frank")
        text = " ".join(["politiek"] * 102 + ["xqzw"] * 12 + ["Anne", "Frank"] * 3)
        a = article(text)
        assert filter_article(a, self.profile, dictionary) is None

    def test_two_mentions_rejected(self):
        a = article(make_ok_text(mentions=1))  # one full name = 2 partial tokens
        assert filter_article(a, self.profile, self.dictionary) == "mentions"

    def test_exactly_three_mentions_kept(self):
        text = make_ok_text(mentions=0, n_words=117) + " Anne Frank Anne"
        assert mention_count(text, {"Anne", "Frank"}) == 3
        assert filter_article(article(text), self.profile, self.dictionary) is None

    def test_bad_date_rejected(self):
        a = article(make_ok_text(), date="14 mei 1940")
        assert filter_article(a, self.profile, self.dictionary) == "bad date"

    def test_first_failing_rule_wins(self):
        # fails both ratio and lifespan; ratio is checked first
        a = article("xqzw " * 150, date="1990-01-01")
        assert filter_article(a, self.profile, self.dictionary) == "ocr"

    def test_name_matching_case_sensitive(self):
        text = make_ok_text(mentions=0, n_words=114) + " anne frank anne frank anne frank"
        assert filter_article(article(text), self.profile, self.dictionary) == "mentions"


class TestExtractSnippets:
    def setup_method(self):
        self.profile = profile("Willem Janssen", birth=1900, death=1980)

    def test_match_mid_document_gives_three_sentence_window(self):
        sentences = [
            "De eerste zin is hier.",
            "De tweede zin volgt nu.",
            "Daarna sprak Willem met de mensen.",
            "De vierde zin sluit af.",
            "De vijfde zin is de laatste.",
        ]
        (snippet,) = extract_snippets(article(" ".join(sentences)), self.profile)
        assert snippet.sentence_span == (2, 4)
        assert snippet.text == " ".join(sentences[1:4])
        assert snippet.matched_token == "Willem"

    def test_match_in_first_sentence_clips_to_two(self):
        sentences = [
            "Willem opende de vergadering gisteren.",
            "De tweede zin volgt hier nog.",
            "De derde zin komt daarna.",
        ]
        (snippet,) = extract_snippets(article(" ".join(sentences)), self.profile)
        assert snippet.sentence_span == (1, 2)

    def test_short_window_dropped(self):
        text = "Willem kwam aan."  # under 50 chars
        assert extract_snippets(article(text), self.profile) == []

    def test_duplicate_texts_deduplicated(self):
        block = "Willem sprak hier met veel mensen over de stad."
        text = f"{block} {block}"
        # both sentences match; both windows cover the same two sentences
        snippets = extract_snippets(article(text), self.profile)
        assert len(snippets) == 1

    def test_adjacent_matches_not_merged(self):
        sentences = [
            "De inleiding staat hier vooraan en is best lang.",
            "Willem sprak met de mensen in de zaal.",
            "Daarna ging Willem weer terug naar huis.",
            "De slotzin staat hier helemaal achteraan.",
        ]
        snippets = extract_snippets(article(" ".join(sentences)), self.profile)
        assert [s.sentence_span for s in snippets] == [(1, 3), (2, 4)]

    def test_anchor_contains_partial_name(self):
        sentences = [
            "Eerste zin zonder naam hier.",
            "Tweede zin noemt Janssen expliciet vandaag.",
            "Derde zin zonder naam weer.",
        ]
        (snippet,) = extract_snippets(article(" ".join(sentences)), self.profile)
        all_sentences = split_sentences(" ".join(sentences))
        lo, hi = snippet.sentence_span
        anchor = all_sentences[lo:hi - 1] if hi - lo == 2 else [all_sentences[lo]]
        assert "Janssen" in all_sentences[1]
        assert snippet.matched_token == "Janssen"


class TestClassifyAndRank:
    def make_models(self):
        schema, pages, roles, clusters, vocabs, neg_vocab = make_role_fixture(
            (12, 12, 12), seed=21, role="politici"
        )
        ts = build_training_set("politici", schema, pages, roles, 0, clusters)
        model_a = train(ts, provider)
        schema2, pages2, roles2, clusters2, vocabs2, _ = make_role_fixture(
            (12, 12, 12), seed=22, role="schrijvers"
        )
        ts2 = build_training_set("schrijvers", schema2, pages2, roles2, 0, clusters2)
        model_b = train(ts2, provider)
        return {"politici": model_a, "schrijvers": model_b}, vocabs, vocabs2

    def snippet(self, text, article_id="a1", span=(1, 3)):
        return Snippet(article_id=article_id, sentence_span=span, text=text, matched_token="X")

    def test_negative_snippets_contribute_nothing(self):
        models, _, _ = self.make_models()
        rng = random.Random(3)
        noise_vocab = make_vocab("stuvwx", 10, rng)  # negative alphabet of both roles
        snippets = [self.snippet(make_text(noise_vocab, rng))]
        assert classify_snippets(snippets, models, provider) == []

    def test_snippet_can_surface_under_multiple_roles(self):
        models, vocabs, vocabs2 = self.make_models()
        rng = random.Random(4)
        text = make_text(vocabs[0], rng) + " " + make_text(vocabs2[1], rng)
        classified = classify_snippets([self.snippet(text)], models, provider)
        assert {c.role for c in classified} == {"politici", "schrijvers"}

    def test_matches_bruteforce_per_pair_classification(self):
        from aspectnews.classifier import NEGATIVE, classify

        models, vocabs, vocabs2 = self.make_models()
        rng = random.Random(5)
        pool = [
            self.snippet(make_text(vocabs[i % 3], rng), article_id=f"a{i}")
            for i in range(6)
        ]
        classified = classify_snippets(pool, models, provider)
        expected = []
        for s in pool:
            for role in sorted(models):
                label, dist = classify(models[role], s.text, provider)
                if label != NEGATIVE:
                    expected.append((s.article_id, role, label, dist[label]))
        got = [(c.snippet.article_id, c.role, c.aspect, c.probability) for c in classified]
        assert sorted(got) == sorted(expected)

    def test_rank_top_keeps_n_best(self):
        from aspectnews.models import ClassifiedSnippet

        entries = [
            ClassifiedSnippet(
                snippet=self.snippet("tekst", article_id=f"a{i}"),
                role="r",
                aspect="x",
                probability=p,
            )
            for i, p in enumerate([0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3])
        ]
        top = rank_top(entries, n=5)
        probs = [e.probability for e in top[("r", "x")]]
        assert probs == [0.9, 0.8, 0.7, 0.6, 0.5]

    def test_rank_top_tie_break_by_article_id(self):
        from aspectnews.models import ClassifiedSnippet

        entries = [
            ClassifiedSnippet(self.snippet("t", article_id=aid), "r", "x", 0.5)
            for aid in ["b", "a", "c"]
        ]
        top = rank_top(entries, n=5)
        assert [e.snippet.article_id for e in top[("r", "x")]] == ["a", "b", "c"]

    def test_rank_top_under_n_keeps_all(self):
        from aspectnews.models import ClassifiedSnippet

        entries = [
            ClassifiedSnippet(self.snippet("t", article_id=f"a{i}"), "r", "x", 0.1 * i)
            for i in range(2)
        ]
        assert len(rank_top(entries, n=5)[("r", "x")]) == 2


class TestMakeFragment:
    def snippet(self, text, token="Willem"):
        return Snippet(article_id="a", sentence_span=(1, 3), text=text, matched_token=token)

    def test_short_text_returned_whole(self):
        text = "Willem sprak " + "w" * 100  # 113 chars
        assert len(text) < 160
        assert make_fragment(self.snippet(text)) == text

    def test_long_text_produces_160_char_window_with_token(self):
        before = "voor " * 40  # 200 chars
        after = " na" * 70
        text = before + "Willem" + after
        frag = make_fragment(self.snippet(text))
        assert len(frag) <= 160
        assert "Willem" in frag
        assert frag.startswith("…")
        assert frag.endswith("…")

    def test_window_expands_to_word_boundaries(self):
        text = ("alfa " * 60) + "Willem" + (" beta" * 60)
        frag = make_fragment(self.snippet(text))
        core = frag.strip("…")
        # no clipped halves of 'alfa'/'beta' at the edges
        assert core.startswith(("alfa", "Willem"))
        assert core.endswith(("beta", "Willem"))

    def test_fragment_length_bound_on_random_snippets(self):
        rng = random.Random(17)
        vocab = make_vocab("abcdefgh", 30, rng, min_len=2, max_len=12)
        for _ in range(1000):
            n = rng.randint(5, 80)
            words = [rng.choice(vocab) for _ in range(n)]
            pos = rng.randint(0, n)
            words.insert(pos, "Willem")
            text = " ".join(words)
            frag = make_fragment(self.snippet(text))
            assert len(frag) <= 160
            assert "Willem" in frag

    def test_token_missing_is_an_error(self):
        with pytest.raises(ValueError, match="not found"):
            make_fragment(self.snippet("geen naam hier", token="Willem"))

    def test_match_start_of_text_has_no_leading_ellipsis(self):
        text = "Willem" + " woord" * 60
        frag = make_fragment(self.snippet(text))
        assert frag.startswith("Willem")
        assert frag.endswith("…")
