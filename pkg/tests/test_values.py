"""Canonical value normalization tests."""

import random
from decimal import Decimal

import pytest

from ldtruth.values import (
    KIND_DATE,
    KIND_NUMBER,
    KIND_REFERENCE,
    KIND_TEXT,
    NormalizedValue,
    normalize_object,
)

XSD = "http://www.w3.org/2001/XMLSchema#"


class TestNumbers:
    def test_typed_integer(self):
        value = normalize_object("93", XSD + "integer")
        assert value.kind == KIND_NUMBER
        assert value.number == Decimal("93")
        assert value.render() == "93"

    def test_typed_decimal(self):
        value = normalize_object("46.0248", XSD + "decimal")
        assert value.number == Decimal("46.0248")
        assert value.render() == "46.0248"

    def test_untyped_numeral_stays_text(self):
        # without a numeric datatype nothing is guessed
        value = normalize_object("93")
        assert value.kind == KIND_TEXT
        assert value.text == "93"

    def test_exponent_renders_plain(self):
        value = normalize_object("1e3", XSD + "double")
        assert value.kind == KIND_NUMBER
        assert value.render() == "1000"

    def test_trailing_zeros_collapse(self):
        a = normalize_object("0.5000", XSD + "decimal")
        b = normalize_object("0.5", XSD + "decimal")
        assert a == b
        assert a.render() == "0.5"

    def test_negative_zero_renders_zero(self):
        value = normalize_object("-0", XSD + "integer")
        assert value.render() == "0"
        assert value == normalize_object("0", XSD + "integer")

    def test_non_numeric_lexical_falls_through(self):
        value = normalize_object("tall", XSD + "integer")
        assert value.kind == KIND_TEXT

    def test_nan_rejected(self):
        value = normalize_object("NaN", XSD + "double")
        assert value.kind == KIND_TEXT


class TestDates:
    @pytest.mark.parametrize("lexical", [
        "1886-10-28", "10/28/1886", "28 October 1886", "28 Oct 1886",
    ])
    def test_full_date_forms_unify(self, lexical):
        value = normalize_object(lexical)
        assert value.kind == KIND_DATE
        assert value.date == (1886, 10, 28)
        assert value.render() == "1886-10-28"

    def test_wildcard_form(self):
        value = normalize_object("1886-#-#")
        assert value.date == (1886, None, None)
        assert value.render() == "1886-#-#"

    def test_year_month(self):
        assert normalize_object("1886-10").date == (1886, 10, None)
        assert normalize_object("October 1886").date == (1886, 10, None)
        assert normalize_object("1886-10").render() == "1886-10-#"

    def test_sept_abbreviation(self):
        assert normalize_object("Sept 1944").date == (1944, 9, None)

    def test_concrete_day_needs_concrete_month(self):
        # the shape is recognizable but the combination is not a date
        value = normalize_object("1886-#-28")
        assert value.kind == KIND_TEXT

    def test_out_of_range_components_fall_through(self):
        assert normalize_object("1886-13-05").kind == KIND_TEXT
        assert normalize_object("32 October 1886").kind == KIND_TEXT

    def test_two_digit_year_is_not_a_date(self):
        assert normalize_object("86-10-28").kind == KIND_TEXT

    def test_unknown_month_name(self):
        assert normalize_object("28 Octember 1886").kind == KIND_TEXT

    def test_typed_date(self):
        value = normalize_object("1886-10-28", XSD + "date")
        assert value.date == (1886, 10, 28)

    def test_typed_datetime_keeps_date_part(self):
        value = normalize_object("1886-10-28T14:30:00Z", XSD + "dateTime")
        assert value.date == (1886, 10, 28)

    def test_typed_gyear(self):
        value = normalize_object("1886", XSD + "gYear")
        assert value.date == (1886, None, None)

    def test_typed_gyearmonth(self):
        value = normalize_object("1886-10", XSD + "gYearMonth")
        assert value.date == (1886, 10, None)

    def test_typed_date_with_timezone(self):
        value = normalize_object("1886-10-28+05:00", XSD + "date")
        assert value.date == (1886, 10, 28)


class TestTextAndReferences:
    def test_whitespace_collapses(self):
        value = normalize_object("  New   York\tHarbor ")
        assert value.text == "New York Harbor"

    def test_iri_objects_become_references(self):
        value = normalize_object("http://example.org/a", is_iri=True)
        assert value.kind == KIND_REFERENCE
        assert value.reference == "http://example.org/a"

    @pytest.mark.parametrize("lexical", ["", "   ", "NULL", "null", "Null"])
    def test_null_markers_yield_nothing(self, lexical):
        assert normalize_object(lexical) is None


class TestValueInvariants:
    def test_exactly_one_payload(self):
        with pytest.raises(ValueError):
            NormalizedValue(KIND_NUMBER, number=Decimal(1), text="x")
        with pytest.raises(ValueError):
            NormalizedValue(KIND_TEXT)

    def test_wildcard_month_with_day_rejected(self):
        with pytest.raises(ValueError):
            NormalizedValue.from_date(1886, None, 28)

    def test_month_range_checked(self):
        with pytest.raises(ValueError):
            NormalizedValue.from_date(1886, 13, 1)

    def test_kind_order(self):
        number = NormalizedValue.from_number("5")
        date = NormalizedValue.from_date(1886, 10, 28)
        text = NormalizedValue.from_text("abc")
        ref = NormalizedValue.from_reference("http://example.org/a")
        keys = [v.sort_key() for v in (number, date, text, ref)]
        assert keys == sorted(keys)

    def test_wildcards_sort_before_concrete(self):
        partial = NormalizedValue.from_date(1886, None, None)
        full = NormalizedValue.from_date(1886, 1, 1)
        assert partial.sort_key() < full.sort_key()

    def test_render_round_trip_is_injective(self):
        rng = random.Random(4821)
        seen = {}
        for _ in range(300):
            pick = rng.randrange(3)
            if pick == 0:
                value = NormalizedValue.from_number(
                    Decimal(rng.randint(-10**6, 10**6)) / (10 ** rng.randrange(4)))
            elif pick == 1:
                month = rng.choice([None, rng.randint(1, 12)])
                day = None if month is None else rng.choice(
                    [None, rng.randint(1, 28)])
                value = NormalizedValue.from_date(rng.randint(1500, 2100),
                                                  month, day)
            else:
                value = NormalizedValue.from_text(
                    "".join(rng.choice("abcdef ") for _ in range(8)).strip() or "x")
            rendered = (value.kind, value.render())
            if rendered in seen:
                assert seen[rendered] == value
            seen[rendered] = value

    def test_date_render_reparses(self):
        rng = random.Random(977)
        for _ in range(200):
            month = rng.choice([None, rng.randint(1, 12)])
            day = None if month is None else rng.choice([None, rng.randint(1, 28)])
            value = NormalizedValue.from_date(rng.randint(1000, 2999), month, day)
            assert normalize_object(value.render()) == value
