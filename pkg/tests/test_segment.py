import math
import random

import pytest
from hypothesis import given, strategies as st

from actionscope.segment import (
    Document,
    MweLexicon,
    association_score,
    induce_lexicon,
    phrase_length,
    segment,
    tokenize,
)

from helpers import greedy_segment_oracle

WORDS = ["riot", "police", "tear", "gas", "march", "vigil", "stand", "off", "the"]
token_lists = st.lists(st.sampled_from(WORDS), max_size=12)


def assert_token_conservation(document: Document):
    assert document.total_tokens == sum(
        freq * phrase_length(phrase) for phrase, freq in document.phrases.items()
    )


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_punctuation_detached(self):
        assert tokenize("riot police, stand off") == ["riot", "police", ",", "stand", "off"]

    def test_sentinels_kept_whole(self):
        assert tokenize("<user> said <url>!") == ["<user>", "said", "<url>", "!"]

    def test_emoji_single_tokens(self):
        assert tokenize("fire 🔥🔥 now") == ["fire", "🔥", "🔥", "now"]

    def test_joined_emoji_stays_one_token(self):
        assert tokenize("a 👍🏽 b") == ["a", "👍🏽", "b"]

    @given(token_lists, token_lists)
    def test_concatenation(self, a, b):
        left, right = " ".join(a), " ".join(b)
        glued = (left + " " + right).strip()
        assert tokenize(glued) == tokenize(left) + tokenize(right)


class TestLexicon:
    def test_rejects_unigrams(self):
        with pytest.raises(ValueError):
            MweLexicon([("tear",)])

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            MweLexicon([("tear", "gas"), ("tear", "gas")])

    def test_file_round_trip(self, tmp_path):
        lexicon = MweLexicon([("tear", "gas"), ("riot", "police"), ("stand", "off", "now")])
        path = tmp_path / "lexicon.txt"
        lexicon.to_file(path)
        assert MweLexicon.from_file(path).entries == lexicon.entries

    def test_file_comments_and_duplicate_error(self, tmp_path):
        path = tmp_path / "lexicon.txt"
        path.write_text("# comment\ntear gas\n\nriot police\n", encoding="utf-8")
        assert len(MweLexicon.from_file(path)) == 2
        path.write_text("tear gas\ntear gas\n", encoding="utf-8")
        with pytest.raises(ValueError, match="duplicate"):
            MweLexicon.from_file(path)


class TestSegment:
    def test_multiword_match_consumed_as_one_phrase(self):
        document = segment(["tear", "gas"], MweLexicon([("tear", "gas")]))
        assert document.phrases == {"tear gas": 1}
        assert document.n_distinct == 1
        assert_token_conservation(document)

    def test_empty_lexicon_unigram_fallback(self):
        document = segment(["tear", "gas"], MweLexicon())
        assert document.phrases == {"tear": 1, "gas": 1}
        assert document.n_distinct == 2

    def test_longest_match_wins(self):
        lexicon = MweLexicon([("stand", "off"), ("stand", "off", "now")])
        document = segment(["stand", "off", "now"], lexicon)
        assert document.phrases == {"stand off now": 1}

    def test_no_overlap_after_consumption(self):
        lexicon = MweLexicon([("tear", "gas"), ("gas", "mask")])
        document = segment(["tear", "gas", "mask"], lexicon)
        assert document.phrases == {"tear gas": 1, "mask": 1}

    @given(
        token_lists,
        st.sets(
            st.tuples(st.sampled_from(WORDS), st.sampled_from(WORDS)), max_size=6
        ),
    )
    def test_matches_recursive_oracle_and_conserves_tokens(self, tokens, entries):
        lexicon = MweLexicon(entries)
        document = segment(tokens, lexicon)
        assert_token_conservation(document)
        oracle = greedy_segment_oracle(tokens, set(lexicon.entries), max(lexicon.max_len, 2))
        assert document.phrases == oracle

    def test_empty_lexicon_equals_bag_of_words(self):
        rng = random.Random(5)
        tokens = [rng.choice(WORDS) for _ in range(40)]
        document = segment(tokens, MweLexicon())
        expected = {}
        for token in tokens:
            expected[token] = expected.get(token, 0) + 1
        assert document.phrases == expected

    def test_new_entry_never_changes_segmentation_before_its_first_match(self):
        def ordered_greedy(tokens, lexicon):
            out, i = [], 0
            while i < len(tokens):
                consumed, key = 1, tokens[i]
                for length in lexicon.lengths_starting_with(tokens[i]):
                    if length <= len(tokens) - i and tuple(
                        tokens[i : i + length]
                    ) in lexicon.entries:
                        consumed = length
                        key = " ".join(tokens[i : i + length])
                        break
                out.append(key)
                i += consumed
            return out

        rng = random.Random(9)
        for _ in range(200):
            tokens = [rng.choice(WORDS) for _ in range(rng.randrange(0, 14))]
            base_entries = {
                (rng.choice(WORDS), rng.choice(WORDS)) for _ in range(rng.randrange(0, 4))
            }
            addition = (rng.choice(WORDS), rng.choice(WORDS), rng.choice(WORDS))
            before = MweLexicon(base_entries)
            after = MweLexicon(base_entries | {addition})
            seq_before = ordered_greedy(tokens, before)
            seq_after = ordered_greedy(tokens, after)
            added_key = " ".join(addition)
            if added_key in seq_after:
                first = seq_after.index(added_key)
                assert seq_after[:first] == seq_before[:first]
            else:
                assert seq_after == seq_before
            # the bag the library reports matches the ordered walk
            bag = {}
            for key in seq_after:
                bag[key] = bag.get(key, 0) + 1
            assert segment(tokens, after).phrases == bag


class TestInduceLexicon:
    def test_strong_collocation_extracted(self):
        # "tear gas" always adjacent, never alone, amid random filler.
        rng = random.Random(3)
        filler = [f"w{i}" for i in range(50)]
        corpus = [["tear", "gas"] + rng.sample(filler, 3) for _ in range(80)]
        corpus += [rng.sample(filler, 5) for _ in range(320)]
        lexicon = induce_lexicon(corpus, min_count=2, min_score=1.0, max_len=2)
        assert ("tear", "gas") in lexicon.entries

    def test_shuffled_corpus_yields_almost_nothing(self):
        rng = random.Random(6)
        vocab = [f"w{i}" for i in range(20)]
        corpus = [[rng.choice(vocab) for _ in range(30)] for _ in range(200)]
        lexicon = induce_lexicon(corpus, min_count=3, min_score=0.5, max_len=3)
        # Independence => expected association near 0; scores straddle it.
        stats_scores = []
        from actionscope.segment import NgramStats

        stats = NgramStats()
        for tokens in corpus:
            stats.add(tokens, 3)
        for gram, count in stats.ngram_counts[2].items():
            if count >= 3:
                stats_scores.append(association_score(stats, gram))
        assert min(stats_scores) < 0 < max(stats_scores)
        assert len(lexicon) <= len(stats_scores) * 0.02

    def test_min_count_dominates(self):
        corpus = [["tear", "gas"]] * 5
        assert len(induce_lexicon(corpus, min_count=6, min_score=-10.0, max_len=2)) == 0

    def test_empty_corpus_is_error(self):
        with pytest.raises(ValueError):
            induce_lexicon([], min_count=1, min_score=0.0, max_len=2)

    def test_max_len_validated(self):
        with pytest.raises(ValueError):
            induce_lexicon([["a", "b"]], max_len=7)

    def test_score_value_on_pure_pair_corpus(self):
        # Two-token docs of one pair: p(gram)=1, p(each token)=1/2.
        corpus = [["tear", "gas"]] * 10
        from actionscope.segment import NgramStats

        stats = NgramStats()
        for tokens in corpus:
            stats.add(tokens, 2)
        assert association_score(stats, ("tear", "gas")) == pytest.approx(
            math.log10(4.0)
        )

    def test_sharded_counting_merges_to_same_lexicon(self):
        rng = random.Random(7)
        vocab = [f"w{i}" for i in range(12)]
        corpus = [[rng.choice(vocab) for _ in range(10)] for _ in range(60)]
        corpus += [["tear", "gas", rng.choice(vocab)] for _ in range(30)]
        from actionscope.segment import NgramStats

        whole = NgramStats()
        for tokens in corpus:
            whole.add(tokens, 3)
        left, right = NgramStats(), NgramStats()
        for i, tokens in enumerate(corpus):
            (left if i % 2 else right).add(tokens, 3)
        left.merge(right)
        assert left.token_counts == whole.token_counts
        assert left.ngram_counts == whole.ngram_counts
        assert left.ngram_positions == whole.ngram_positions
