import json
import re

import pytest

from mlkit import REGISTRY
from mlkit.codegen import (
    BACKENDS,
    generate_foreign_wrapper,
    registry_dump,
    write_wrapper_tree,
)
from mlkit.errors import UnknownMethodError, ValidationError

SET_CALL = re.compile(
    r'await rt\.(packSet\w+)\(pack, "(\w+)"(?:, args\.(\w+)'
    r'(?: \?\? (.+?))?)?\);'
)
GET_CALL = re.compile(r'outputs\.(\w+) = await rt\.(packGet\w+)\(pack, "(\w+)"\);')
INPUT_FIELD = re.compile(r"^  (\w+)(\??): ([\w\[\]]+);$", re.MULTILINE)


def parse_defaults(source):
    """Recover {param: default-literal} from the emitted set calls."""
    out = {}
    for _, name, arg, default in SET_CALL.findall(source):
        if default:
            out[name] = default
    return out


class TestWrapperAudit:
    @pytest.mark.parametrize("name", sorted(REGISTRY.names()))
    def test_params_recovered_exactly(self, name):
        source = generate_foreign_wrapper(name)
        spec = REGISTRY.get(name)

        set_names = [m[1] for m in SET_CALL.findall(source)]
        assert set_names == [p.name for p in spec.inputs()]

        got_outputs = [m[2] for m in GET_CALL.findall(source)]
        assert got_outputs == [p.name for p in spec.outputs()]

    @pytest.mark.parametrize("name", sorted(REGISTRY.names()))
    def test_defaults_recovered_exactly(self, name):
        source = generate_foreign_wrapper(name)
        spec = REGISTRY.get(name)
        got = parse_defaults(source)
        want = {}
        for p in spec.inputs():
            if p.default is None:
                continue
            if p.type_tag == "string":
                want[p.name] = json.dumps(p.default)
            elif p.type_tag == "double":
                want[p.name] = repr(float(p.default))
            else:
                want[p.name] = repr(p.default)
        assert got == want

    def test_required_params_set_unconditionally(self):
        source = generate_foreign_wrapper("knn")
        assert 'await rt.packSetMatrix(pack, "reference", args.reference);' \
            in source
        assert "if (args.reference !== undefined)" not in source

    def test_help_text_embedded(self):
        source = generate_foreign_wrapper("kde")
        assert "guaranteed relative error" in source
        assert source.count("/**") >= 1

    def test_model_output_uses_handle(self):
        source = generate_foreign_wrapper("ffn")
        assert "packGetModel(pack, \"output_model\")" in source
        assert "output_model?: ModelHandle;" in source

    def test_regeneration_byte_identical(self):
        for name in REGISTRY.names():
            assert generate_foreign_wrapper(name) == \
                generate_foreign_wrapper(name)

    def test_unknown_method_and_backend(self):
        with pytest.raises(UnknownMethodError):
            generate_foreign_wrapper("nope")
        with pytest.raises(ValidationError):
            generate_foreign_wrapper("kmeans", backend="cobol")

    def test_backend_table(self):
        assert set(BACKENDS) == {"typescript"}


class TestWrapperTree:
    def test_layout_one_file_per_method_plus_index(self, tmp_path):
        written = write_wrapper_tree(str(tmp_path))
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == sorted([f"{m}.ts" for m in REGISTRY.names()]
                               + ["index.ts"])
        assert len(written) == 8

    def test_tree_regeneration_stable(self, tmp_path):
        write_wrapper_tree(str(tmp_path / "a"))
        write_wrapper_tree(str(tmp_path / "b"))
        for f in (tmp_path / "a").iterdir():
            twin = tmp_path / "b" / f.name
            assert f.read_bytes() == twin.read_bytes()

    def test_index_exports_every_method(self, tmp_path):
        write_wrapper_tree(str(tmp_path))
        index = (tmp_path / "index.ts").read_text()
        for name in REGISTRY.names():
            assert f'from "./{name}.js"' in index


class TestRegistryDump:
    def test_covers_registry(self):
        dump = registry_dump()
        assert set(dump) == set(REGISTRY.names())
        for name, info in dump.items():
            spec = REGISTRY.get(name)
            assert [p["name"] for p in info["params"]] == \
                [p.name for p in spec.params]

    def test_json_serializable_and_stable(self):
        a = json.dumps(registry_dump(), sort_keys=True)
        b = json.dumps(registry_dump(), sort_keys=True)
        assert a == b
