import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stacknas.encoding import (
    FeatureMatrix,
    RawArchitecture,
    SearchSpaceSchema,
    drop_constant_columns,
    encode_architectures,
    encode_onehot,
    encode_ordinal,
    format_architecture,
    parse_architecture,
    select_columns,
)
from stacknas.errors import DataError, DomainError, ParseError, StructureError

SCHEMA = SearchSpaceSchema()


@st.composite
def architectures(draw, schema=SCHEMA):
    sym = draw(st.sampled_from(schema.depth_symbols))
    active = schema.active_layers(sym)
    code = st.integers(1, 3)
    pairs = [(draw(code), draw(code)) for _ in range(active)]
    pairs += [(0, 0)] * (schema.max_layers - active)
    embed = draw(st.integers(0, 3)) if schema.includes_embed_column else None
    return RawArchitecture(sym, tuple(pairs), embed)


class TestSchema:
    def test_defaults(self):
        assert SCHEMA.max_layers == 12
        assert SCHEMA.token_length == 25
        assert [SCHEMA.ordinal(s) for s in "jkl"] == [1, 2, 3]
        assert [SCHEMA.active_layers(s) for s in "jkl"] == [10, 11, 12]

    def test_columns(self):
        cols = SCHEMA.ordinal_columns()
        assert cols[:3] == ["depth", "layer1_heads", "layer1_mlp"]
        assert len(cols) == 25
        assert len(SCHEMA.onehot_columns()) == 3 + 4 * 24

    @pytest.mark.parametrize(
        "kwargs",
        [{"max_layers": 0}, {"depth_symbols": ()}, {"depth_symbols": ("j", "j")}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SearchSpaceSchema(**kwargs)

    def test_embed_column_length(self):
        assert SearchSpaceSchema(includes_embed_column=True).token_length == 26


class TestParse:
    def test_full_depth(self):
        arch = parse_architecture("l" + "12" * 12)
        assert arch.depth_code == "l"
        assert arch.n_active == 12
        assert arch.layer_tokens == ((1, 2),) * 12

    def test_padded(self):
        arch = parse_architecture("j" + "13" * 10 + "00" * 2)
        assert arch.depth_code == "j"
        assert arch.n_active == 10
        assert arch.layer_tokens[10:] == ((0, 0), (0, 0))

    def test_digit_out_of_domain(self):
        with pytest.raises(ParseError) as exc:
            parse_architecture("k" + "12" * 11 + "40")
        assert exc.value.position == 23

    @pytest.mark.parametrize("text", ["", "l", "l" + "12" * 11, "l" + "12" * 12 + "1"])
    def test_bad_length(self, text):
        with pytest.raises(ParseError):
            parse_architecture(text)

    def test_unknown_depth_symbol(self):
        with pytest.raises(DomainError):
            parse_architecture("m" + "12" * 12)

    @pytest.mark.parametrize(
        "text",
        [
            "j" + "13" * 9 + "00" + "13" + "00",  # padding in the middle
            "j" + "13" * 10 + "10" + "00",  # half-padded pair
            "j" + "13" * 11 + "00",  # wrong padding count for depth j
            "l" + "13" * 11 + "00",
        ],
    )
    def test_structure_errors(self, text):
        with pytest.raises(StructureError):
            parse_architecture(text)

    def test_errors_are_data_errors(self):
        for text in ["x", "m" + "12" * 12]:
            with pytest.raises(DataError):
                parse_architecture(text)

    def test_embed_column(self):
        schema = SearchSpaceSchema(includes_embed_column=True)
        arch = parse_architecture("k" + "21" * 11 + "00" + "3", schema)
        assert arch.embed_code == 3
        assert format_architecture(arch, schema).endswith("3")

    @settings(max_examples=200, deadline=None)
    @given(architectures())
    def test_round_trip(self, arch):
        assert parse_architecture(format_architecture(arch)) == arch


class TestOrdinal:
    def test_padding_becomes_neutral(self):
        arch = RawArchitecture("j", ((1, 3),) + ((2, 2),) * 9 + ((0, 0),) * 2)
        v = encode_ordinal(arch).values
        np.testing.assert_array_equal(v[:5], [-1, -1, 1, 0, 0])
        np.testing.assert_array_equal(v[-4:], [0, 0, 0, 0])

    def test_neutral_fixed_point(self):
        arch = parse_architecture("k" + "22" * 11 + "00")
        assert np.all(encode_ordinal(arch).values == 0)

    def test_all_ones(self):
        arch = parse_architecture("l" + "33" * 12)
        assert np.all(encode_ordinal(arch).values == 1)

    def test_embed_dropped(self):
        schema = SearchSpaceSchema(includes_embed_column=True)
        a = parse_architecture("l" + "33" * 12 + "1", schema)
        b = parse_architecture("l" + "33" * 12 + "2", schema)
        fa, fb = encode_ordinal(a, schema), encode_ordinal(b, schema)
        assert len(fa.values) == 25
        np.testing.assert_array_equal(fa.values, fb.values)

    @settings(max_examples=200, deadline=None)
    @given(architectures())
    def test_entries_in_range(self, arch):
        fv = encode_ordinal(arch)
        assert set(np.unique(fv.values)) <= {-1.0, 0.0, 1.0}
        assert len(fv.values) == len(fv.column_names) == 25

    @settings(max_examples=200, deadline=None)
    @given(architectures(), architectures())
    def test_injective(self, a, b):
        same = np.array_equal(encode_ordinal(a).values, encode_ordinal(b).values)
        assert same == (a == b)


class TestOnehot:
    def test_depth_blocks(self):
        j = encode_onehot(parse_architecture("j" + "13" * 10 + "00" * 2)).values
        l = encode_onehot(parse_architecture("l" + "13" * 12)).values
        np.testing.assert_array_equal(j[:3], [1, 0, 0])
        np.testing.assert_array_equal(l[:3], [0, 0, 1])

    @settings(max_examples=100, deadline=None)
    @given(architectures())
    def test_blocks_sum_to_one(self, arch):
        v = encode_onehot(arch).values
        assert v[:3].sum() == 1
        np.testing.assert_array_equal(v[3:].reshape(-1, 4).sum(axis=1), 1)


class TestDropConstant:
    def _m(self, values, names):
        return FeatureMatrix(np.asarray(values, dtype=float), list(names))

    def test_zero_column_dropped(self):
        m = self._m([[0, 1], [0, 2], [0, 3]], ["a", "b"])
        out, dropped = drop_constant_columns(m)
        assert dropped == ["a"]
        assert out.column_names == ["b"]
        np.testing.assert_array_equal(out.values, [[1], [2], [3]])

    def test_identity(self):
        m = self._m([[0, 1], [1, 2], [0, 3]], ["a", "b"])
        out, dropped = drop_constant_columns(m)
        assert dropped == []
        np.testing.assert_array_equal(out.values, m.values)

    def test_two_constants_in_order(self):
        m = self._m([[5, 0, 7], [5, 1, 7]], ["c1", "v", "c2"])
        out, dropped = drop_constant_columns(m)
        assert dropped == ["c1", "c2"]
        assert out.column_names == ["v"]

    def test_all_constant(self):
        with pytest.raises(DataError):
            drop_constant_columns(self._m([[1, 2], [1, 2]], ["a", "b"]))

    def test_empty(self):
        with pytest.raises(DataError):
            drop_constant_columns(self._m(np.zeros((0, 2)), ["a", "b"]))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(architectures(), min_size=3, max_size=12))
    def test_idempotent(self, archs):
        m = encode_architectures(archs, SCHEMA, "ordinal")
        try:
            once, _ = drop_constant_columns(m)
        except DataError:
            return
        twice, dropped = drop_constant_columns(once)
        assert dropped == []
        assert twice.column_names == once.column_names
        np.testing.assert_array_equal(twice.values, once.values)

    def test_select_columns(self):
        m = self._m([[1, 2, 3]], ["a", "b", "c"])
        out = select_columns(m, ["c", "a"])
        np.testing.assert_array_equal(out.values, [[3, 1]])
        with pytest.raises(DataError, match="zz"):
            select_columns(m, ["a", "zz"])
