import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import LEVELS, mixed_schema, random_dataset
from ddeba import (
    Dataset,
    Feature,
    FeatureKind,
    ProjectRecord,
    Schema,
    ValidationError,
    ordinal_to_unit_interval,
    parse_csv,
    parse_schema,
    write_csv,
)
from ddeba.dataset import format_schema, parse_query_csv, record_from_mapping

SCHEMA_TEXT = """\
# toy
size,interval
lang,nominal
cx,ordinal,low|mid|high
effort,effort
"""


@pytest.fixture
def schema():
    return parse_schema(SCHEMA_TEXT)


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_parse_three_rows(tmp_path, schema):
    path = write(tmp_path, "size,lang,cx,effort\n10,java,low,100\n30,c,mid,200\n25,java,high,300\n")
    ds = parse_csv(path, schema)
    assert ds.n == 3
    assert ds.feature_ranges["size"] == (10.0, 30.0)
    assert ds.ordinal_rank_tables["cx"] == {"low": 1, "mid": 2, "high": 3}
    assert ds.records[1].values == (30.0, "c", "mid")
    assert list(ds.efforts) == [100.0, 200.0, 300.0]


def test_header_order_is_irrelevant(tmp_path, schema):
    path = write(tmp_path, "effort,cx,lang,size\n100,low,java,10\n200,mid,c,30\n")
    ds = parse_csv(path, schema)
    assert ds.records[0].values == (10.0, "java", "low")


def test_all_missing_column_has_no_range(tmp_path, schema):
    path = write(tmp_path, "size,lang,cx,effort\n?,java,low,100\n?,c,mid,200\n,c,mid,250\n")
    ds = parse_csv(path, schema)
    assert ds.feature_ranges["size"] is None
    assert all(r.values[0] is None for r in ds.records)


def test_custom_missing_token(tmp_path, schema):
    path = write(tmp_path, "size,lang,cx,effort\nNA,java,low,100\n5,c,NA,200\n")
    ds = parse_csv(path, schema, missing_token="NA")
    assert ds.records[0].values[0] is None
    assert ds.records[1].values[2] is None


@pytest.mark.parametrize(
    "text, match",
    [
        ("size,lang,cx,effort,extra\n1,a,low,1,2\n2,b,low,1,2\n", "unknown column"),
        ("size,lang,effort\n1,a,1\n2,b,1\n", "missing column"),
        ("size,lang,cx,effort\nbig,a,low,1\n2,b,low,1\n", "not a number"),
        ("size,lang,cx,effort\n1,a,huge,1\n2,b,low,1\n", "not in"),
        ("size,lang,cx,effort\n1,a,low,1\n", "at least 2"),
        ("size,lang,cx,effort\n1,a,low,?\n2,b,low,1\n", "missing effort"),
        ("size,lang,cx,effort\n1,a,low,-5\n2,b,low,1\n", "positive"),
        ("size,lang,cx,effort\n1,a,low\n2,b,low,1\n", "expected 4 cells"),
        ('size,lang,cx,effort\n1,"a,low,1\n', "malformed|expected"),
        ("size,lang,cx,effort\ninf,a,low,1\n2,b,low,1\n", "not finite"),
    ],
)
def test_parse_errors(tmp_path, schema, text, match):
    with pytest.raises(ValidationError, match=match):
        parse_csv(write(tmp_path, text), schema)


def test_missing_file(tmp_path, schema):
    with pytest.raises(ValidationError, match="not found"):
        parse_csv(tmp_path / "nope.csv", schema)


def test_ignored_columns(tmp_path):
    schema = parse_schema("ignore,Project\nsize,interval\neffort,Effort\n")
    ds = parse_csv(write(tmp_path, "Project,size,Effort\n1,3,10\n2,5,20\n"), schema)
    assert ds.n == 2 and ds.schema.ignored == ("Project",)


@pytest.mark.parametrize(
    "text, match",
    [
        ("size,interval\n", "effort"),
        ("size,weird\neffort,e\n", "expected name,kind"),
        ("a,interval\na,nominal\neffort,e\n", "unique"),
        ("cx,ordinal\neffort,e\n", "needs levels"),
        ("cx,ordinal,a|a\neffort,e\n", "duplicate"),
        ("lang,nominal,a|b\neffort,e\n", "only allowed"),
        ("e,interval\neffort,e\n", "must not be listed"),
    ],
)
def test_schema_errors(text, match):
    with pytest.raises(ValidationError, match=match):
        parse_schema(text)


def test_schema_round_trip(schema):
    assert parse_schema(format_schema(schema)) == schema


@pytest.mark.parametrize("level, z", [("low", 0.0), ("high", 1.0), ("mid", 0.5)])
def test_ordinal_to_unit_interval(tmp_path, schema, level, z):
    ds = parse_csv(write(tmp_path, "size,lang,cx,effort\n1,a,low,1\n2,b,low,1\n"), schema)
    assert ordinal_to_unit_interval(ds, "cx", level) == z


def test_ordinal_single_level_maps_to_zero():
    schema = Schema((Feature("cx", FeatureKind.ORDINAL, ("only",)),), "e")
    ds = Dataset(schema, [ProjectRecord(("only",), 1.0), ProjectRecord(("only",), 2.0)])
    assert ordinal_to_unit_interval(ds, "cx", "only") == 0.0


def test_ordinal_errors(tmp_path, schema):
    ds = parse_csv(write(tmp_path, "size,lang,cx,effort\n1,a,low,1\n2,b,low,1\n"), schema)
    with pytest.raises(ValidationError):
        ordinal_to_unit_interval(ds, "lang", "a")
    with pytest.raises(ValidationError):
        ordinal_to_unit_interval(ds, "cx", "extreme")
    with pytest.raises(ValidationError):
        ordinal_to_unit_interval(ds, "nope", "low")


@given(st.lists(st.sampled_from(["a", "b", "c", "d", "e"]), min_size=2, max_size=5, unique=True))
def test_ordinal_monotone_and_extremes(levels):
    schema = Schema((Feature("o", FeatureKind.ORDINAL, tuple(levels)),), "e")
    ds = Dataset(schema, [ProjectRecord((levels[0],), 1.0), ProjectRecord((levels[-1],), 1.0)])
    zs = [ordinal_to_unit_interval(ds, "o", lv) for lv in levels]
    assert zs == sorted(zs) and len(set(zs)) == len(zs)
    assert zs[0] == 0.0 and zs[-1] == 1.0


def test_csv_round_trip(tmp_path, rng):
    for _ in range(20):
        ds = random_dataset(rng, int(rng.integers(2, 15)))
        path = tmp_path / "rt.csv"
        write_csv(ds, path)
        back = parse_csv(path, ds.schema)
        assert back.records == ds.records
        assert back.feature_ranges == ds.feature_ranges
        assert np.array_equal(back.encoded, ds.encoded, equal_nan=True)


def test_csv_round_trip_exact_floats(tmp_path):
    schema = Schema((Feature("x", FeatureKind.INTERVAL),), "e")
    ds = Dataset(schema, [ProjectRecord((0.1 + 0.2,), 1 / 3), ProjectRecord((1e-300,), 7.0)])
    write_csv(ds, tmp_path / "f.csv")
    assert parse_csv(tmp_path / "f.csv", schema).records == ds.records


def test_ranges_permutation_invariant(rng):
    ds = random_dataset(rng, 10)
    perm = rng.permutation(10)
    assert ds.subset(perm).feature_ranges == ds.feature_ranges


def test_subset_refreezes_ranges():
    schema = Schema((Feature("x", FeatureKind.INTERVAL),), "e")
    ds = Dataset(schema, [ProjectRecord((v,), 1.0) for v in (0.0, 5.0, 10.0)])
    assert ds.without(2).feature_ranges["x"] == (0.0, 5.0)
    assert ds.feature_ranges["x"] == (0.0, 10.0)


def test_dataset_is_read_only(rng):
    ds = random_dataset(rng, 4)
    with pytest.raises(ValueError):
        ds.encoded[0, 0] = 1.0
    with pytest.raises(ValueError):
        ds.efforts[0] = 1.0


def test_query_may_lack_effort(tmp_path, schema):
    q = parse_query_csv(write(tmp_path, "size,lang,cx\n12,java,mid\n", "q.csv"), schema)
    assert q.effort is None and q.values == (12.0, "java", "mid")
    with pytest.raises(ValidationError, match="exactly one row"):
        parse_query_csv(write(tmp_path, "size,lang,cx\n1,a,low\n2,b,low\n", "q2.csv"), schema)


def test_record_from_mapping(schema):
    q = record_from_mapping(schema, {"size": "4", "cx": "?"})
    assert q.values == (4.0, None, None)
    with pytest.raises(ValidationError, match="unknown column"):
        record_from_mapping(schema, {"colour": "red"})


def test_mixed_schema_helper_shape():
    s = mixed_schema()
    assert [f.kind for f in s.features][-1] is FeatureKind.ORDINAL
    assert s.features[-1].levels == LEVELS
