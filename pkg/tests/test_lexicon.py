import pytest

from ambientkit.errors import LensTooWide, LoadError
from ambientkit.lexicon import Lexicon, apply_lens, load_lexicon


def write(tmp_path, text, name="lex.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_load_basic(tmp_path):
    path = write(tmp_path, "word,score\ngood,7.0\nbad,3.0\n")
    lex = load_lexicon(path)
    assert len(lex) == 2
    assert lex.score("good") == 7.0
    assert lex.score("missing") is None
    assert "bad" in lex
    assert lex.duplicates == 0


def test_load_tab_delimited(tmp_path):
    path = write(tmp_path, "word\tscore\ngood\t7.0\n", name="lex.tsv")
    assert load_lexicon(path).score("good") == 7.0


def test_non_numeric_score_row_number(tmp_path):
    path = write(tmp_path, 'word,score\ngood,x\n')
    with pytest.raises(LoadError) as info:
        load_lexicon(path)
    assert info.value.row == 1


def test_duplicates_last_wins_with_counter(tmp_path):
    path = write(tmp_path, "word,score\ngood,7.0\ngood,6.0\n")
    lex = load_lexicon(path)
    assert len(lex) == 1
    assert lex.score("good") == 6.0
    assert lex.duplicates == 1


def test_missing_header(tmp_path):
    path = write(tmp_path, "good,7.0\nbad,3.0\n")
    with pytest.raises(LoadError):
        load_lexicon(path)


def test_extra_columns_ignored(tmp_path):
    path = write(tmp_path, "rank,word,score\n1,good,7.0\n")
    assert load_lexicon(path).score("good") == 7.0


def test_empty_lexicon_rejected(tmp_path):
    path = write(tmp_path, "word,score\n")
    with pytest.raises(LoadError):
        load_lexicon(path)


def make(entries):
    return Lexicon(entries=entries, name="fixture")


def test_lens_removes_inclusive_interval():
    lex = make({"good": 7.0, "meh": 5.0, "bad": 3.0})
    lensed = apply_lens(lex, 4.0, 6.0)
    assert set(lensed.entries) == {"good", "bad"}
    assert lensed.lens == (4.0, 6.0)


def test_lens_too_wide():
    lex = make({"good": 7.0, "meh": 5.0, "bad": 3.0})
    with pytest.raises(LensTooWide):
        apply_lens(lex, 0.0, 10.0)


def test_lens_outside_score_range_is_noop():
    lex = make({"good": 7.0, "bad": 3.0})
    lensed = apply_lens(lex, 9.5, 9.9)
    assert dict(lensed.entries) == dict(lex.entries)


def test_lens_order_validated():
    lex = make({"good": 7.0})
    with pytest.raises(ValueError):
        apply_lens(lex, 6.0, 4.0)


def test_lexicon_validation():
    with pytest.raises(ValueError):
        make({})
    with pytest.raises(ValueError):
        make({"good": float("nan")})


def test_fixture_file(lexicon):
    assert lexicon.score("energy") == 7.2
    assert lexicon.score("radiation") == 2.6
    assert len(lexicon) >= 30
