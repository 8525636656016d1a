import json

import pytest

from nv import codes
from nv.datadir import data_dir, load_manifest


class TestConstructions:
    def test_binary_golay(self):
        c = codes.binary_golay()
        assert codes.verify_code(c)
        assert c.size() == 4096
        assert codes.weight_distribution(c)[8] == 759

    def test_ternary_golay(self):
        c = codes.ternary_golay()
        assert codes.verify_code(c)
        assert c.size() == 729
        assert codes.weight_distribution(c)[6] == 264

    def test_octacode(self):
        c = codes.octacode()
        assert codes.verify_code(c)
        assert c.size() == 256
        ews = {codes.euclidean_weight(w, 4) for w in c.codewords() if any(w)}
        assert min(ews) == 8
        assert all(e % 8 == 0 for e in ews)

    def test_deterministic(self):
        assert codes.binary_golay().generators == codes.binary_golay().generators
        assert codes.ternary_golay().generators == codes.ternary_golay().generators


class TestSerialization:
    def test_shipped_files_match_manifest(self):
        base = data_dir()
        manifest = load_manifest(base)
        builders = {
            "codes/binary_golay.json": codes.binary_golay,
            "codes/ternary_golay.json": codes.ternary_golay,
            "codes/octacode.json": codes.octacode,
        }
        for rel, builder in builders.items():
            assert rel in manifest
            loaded = codes.load_code(str(base / rel), manifest[rel])
            assert loaded.generators == builder().generators

    def test_checksum_rejects_tampering(self, tmp_path):
        c = codes.octacode()
        path = tmp_path / "octa.json"
        codes.write_code(c, str(path))
        obj = json.loads(path.read_text())
        obj["generators"][0][0] ^= 1
        path.write_text(json.dumps(obj))
        with pytest.raises(codes.CodeError):
            codes.load_code(str(path), codes.sha256_of(codes.code_to_json(c)))

    def test_verification_rejects_broken_code(self, tmp_path):
        c = codes.binary_golay()
        c.generators[0][0] ^= 1  # break self-duality
        path = tmp_path / "bad.json"
        codes.write_code(c, str(path))
        with pytest.raises(codes.CodeError):
            codes.load_code(str(path))
