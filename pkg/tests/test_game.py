import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stacksort.game import (
    ILLEGAL,
    LengthCapExceeded,
    State,
    apply_move,
    apply_string,
    catalan,
    complete_characterizations,
    count_language,
    enumerate_language,
    final_state,
    generated_permutation,
    initial_state,
    is_n_complete,
    letter_counts,
    parse_moves,
    state_from_record,
    state_of_permutation,
)


def test_initial_and_final():
    s = initial_state(3, 2)
    assert s.is_initial() and not s.is_final()
    assert s.to_text() == "in:[1,2,3] s1:[] s2:[] out:[]"
    assert apply_string("123123123", s) == final_state(3, 2)


def test_single_moves():
    s = initial_state(2, 2)
    s = apply_move(1, s)
    assert s == State((2,), ((1,), ()), ())
    s = apply_move(2, s)
    assert s == State((2,), ((), (1,)), ())
    assert apply_move(3, s) == State((2,), ((), ()), (1,))


def test_stack_is_lifo():
    # push 1, 2 then pop: 2 comes out first
    assert apply_string("1122", initial_state(2, 1)).output == (2, 1)


def test_illegal_is_absorbing():
    s = initial_state(2, 2)
    assert apply_string("2", s) is ILLEGAL
    assert apply_string("21", s) is ILLEGAL
    assert apply_string("123", ILLEGAL) is ILLEGAL
    assert apply_string("111", s) is ILLEGAL
    assert ILLEGAL.to_text() == "ILLEGAL"


def test_out_of_range_move_is_an_error():
    with pytest.raises(ValueError):
        apply_string("4", initial_state(2, 2))
    with pytest.raises(ValueError):
        parse_moves("124", k=2)
    with pytest.raises(ValueError):
        parse_moves("1a2")


def test_parse_moves():
    assert parse_moves("m 12 3") == "123"
    assert parse_moves("121121232333", k=2) == "121121232333"


def test_no_stacks():
    s = initial_state(3, 0)
    assert apply_string("111", s) == final_state(3, 0)


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        State((1,), ((1,),), ())


def test_record_round_trip():
    s = apply_string("1121", initial_state(3, 2))
    assert state_from_record(s.to_record()) == s
    assert state_from_record(ILLEGAL.to_record()) is ILLEGAL


def test_figure_one_trace():
    s = apply_string("121121232333", state_of_permutation((4, 2, 3, 1), 2))
    assert s.output == (1, 2, 3, 4) and s.is_final()


def test_generated_permutation():
    assert generated_permutation("121323", 2, 2) == (1, 2)
    assert generated_permutation("112323", 2, 2) == (2, 1)
    assert generated_permutation("1213", 2, 2) is None


def test_lambda1_two_two_exact():
    words = list(enumerate_language(2, 2, "I"))
    assert words == ["112233", "112323", "121233", "121323", "123123"]
    # two congruence classes by generated permutation
    by_perm = {}
    for w in words:
        by_perm.setdefault(generated_permutation(w, 2, 2), set()).add(w)
    assert by_perm == {(1, 2): {"123123", "121323", "112233"}, (2, 1): {"112323", "121233"}}


@pytest.mark.parametrize("n,k", [(1, 2), (2, 2), (3, 2), (2, 3), (4, 1)])
def test_language_nesting_and_counts(n, k):
    one = list(enumerate_language(n, k, "I"))
    two = list(enumerate_language(n, k, "II"))
    three = list(enumerate_language(n, k, "III"))
    assert one == sorted(one) and two == sorted(two) and three == sorted(three)
    assert set(one) <= set(two) <= set(three)
    for tier, words in zip("I II III".split(), (one, two, three)):
        assert count_language(n, k, tier) == len(words)
    assert all(is_n_complete(w, n, k) for w in one)


def test_lambda1_one_stack_is_catalan():
    # Dyck words, in bijection with one-stack outputs
    for n in range(8):
        assert count_language(n, 1, "I") == catalan(n)
    for n in range(6):
        perms = {generated_permutation(w, n, 1) for w in enumerate_language(n, 1, "I")}
        assert len(perms) == catalan(n)


def test_language_cap_and_bad_tier():
    with pytest.raises(LengthCapExceeded):
        next(enumerate_language(6, 2, "I"))
    with pytest.raises(ValueError):
        count_language(2, 2, "IV")


def test_characterizations_on_examples():
    assert complete_characterizations("123123", 2, 2) == (True, True, True)
    assert complete_characterizations("132", 1, 2) == (False, False, False)
    assert complete_characterizations("112233", 1, 2) == (False, False, False)


def test_letter_counts():
    assert letter_counts("1123", 2) == (2, 1, 1)


words = st.text(alphabet="123", max_size=12)


@settings(max_examples=300, deadline=None)
@given(words, words)
def test_action_law(u, v):
    s = State(tuple(range(1, 7)), ((7, 8, 9), (10,)), (11,))
    assert apply_string(u + v, s) == apply_string(v, apply_string(u, s))


@settings(max_examples=200, deadline=None)
@given(words)
def test_characterizations_agree(word):
    for n in range(0, 5):
        a, b, c = complete_characterizations(word, n, 2)
        assert a == b == c
