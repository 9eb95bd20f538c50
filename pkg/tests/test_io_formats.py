"""File format round trips, trajectory parsing, report rendering."""

import json
import warnings

import numpy as np
import pytest

from pbcjones.errors import PbcJonesError
from pbcjones.fixtures import chainmail_system, hopf_link, melt_dump_text, trefoil
from pbcjones.io_formats import (AnalysisReport, canonical_dumps,
                                 curves_from_json_obj, curves_to_json_obj,
                                 read_curves, read_system, read_trajectory,
                                 report_text, select_interior_chains,
                                 system_from_json_obj, system_to_json_obj,
                                 unwrap_chain, write_curves, write_system)
from pbcjones.laurent import LaurentPoly


class TestSystemJson:
    def test_round_trip_is_byte_identical(self, tmp_path):
        system = chainmail_system()
        first = canonical_dumps(system_to_json_obj(system))
        again = canonical_dumps(system_to_json_obj(system_from_json_obj(json.loads(first))))
        assert first == again

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "sys.json"
        write_system(str(path), chainmail_system())
        system = read_system(str(path))
        assert [c.id for c in system.chains] == ["ring"]
        assert system.cell.periodic == (True, False, False)

    def test_missing_cell(self):
        with pytest.raises(PbcJonesError, match="missing 'cell'"):
            system_from_json_obj({"format": "pbcjones/system-v1", "chains": []})

    def test_unsupported_format(self):
        with pytest.raises(PbcJonesError, match="unsupported format"):
            system_from_json_obj({"format": "pbcjones/system-v9", "cell": {}, "chains": []})

    def test_bad_basis_shape(self):
        obj = system_to_json_obj(chainmail_system())
        obj["cell"]["basis"] = [[1, 0, 0], [0, 1, 0]]
        with pytest.raises(PbcJonesError, match="cell.basis"):
            system_from_json_obj(obj)

    def test_periodic_flags_must_be_booleans(self):
        obj = system_to_json_obj(chainmail_system())
        obj["cell"]["periodic"] = [1, 0, 0]
        with pytest.raises(PbcJonesError, match="three booleans"):
            system_from_json_obj(obj)

    def test_chain_error_names_its_index(self):
        obj = system_to_json_obj(chainmail_system())
        obj["chains"][0]["topology"] = "sideways"
        with pytest.raises(PbcJonesError, match=r"chains\[0\]"):
            system_from_json_obj(obj)

    def test_non_numeric_coordinate(self):
        obj = system_to_json_obj(chainmail_system())
        obj["chains"][0]["arcs"][0][0][1] = "up"
        with pytest.raises(PbcJonesError, match="non-numeric"):
            system_from_json_obj(obj)

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "cell": [,]\n}\n')
        with pytest.raises(PbcJonesError, match=r"broken\.json:2"):
            read_system(str(path))


class TestCurvesJson:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "curves.json"
        curves = list(hopf_link()) + [trefoil()]
        write_curves(str(path), curves)
        back = read_curves(str(path))
        assert [c.id for c in back] == [c.id for c in curves]
        for a, b in zip(back, curves):
            assert a.closed == b.closed
            assert np.allclose(a.vertices, b.vertices)

    def test_byte_identical(self):
        curves = list(hopf_link())
        first = canonical_dumps(curves_to_json_obj(curves))
        again = canonical_dumps(curves_to_json_obj(curves_from_json_obj(json.loads(first))))
        assert first == again

    def test_closed_must_be_boolean(self):
        obj = curves_to_json_obj([trefoil()])
        obj["curves"][0]["closed"] = "yes"
        with pytest.raises(PbcJonesError, match="boolean"):
            curves_from_json_obj(obj)

    def test_curve_constructor_errors_are_located(self):
        obj = curves_to_json_obj([trefoil()])
        obj["curves"][0]["vertices"][-1] = obj["curves"][0]["vertices"][0]
        with pytest.raises(PbcJonesError, match=r"curves\[0\]"):
            curves_from_json_obj(obj)


class TestLammpsDump:
    def test_parses_melt_snapshot(self, tmp_path):
        path = tmp_path / "melt.dump"
        path.write_text(melt_dump_text())
        frames = read_trajectory(str(path))
        assert len(frames) == 1
        frame = frames[0]
        assert frame.timestep == 0
        assert len(frame.ids) == 98
        chains = frame.chains()
        assert sorted(chains) == list(range(1, 8))
        assert all(len(p) == 14 for p in chains.values())
        assert np.allclose(frame.bounds, [[0.0, 12.0]] * 3)

    def test_scaled_coordinates_match_unscaled(self, tmp_path):
        plain = tmp_path / "plain.dump"
        scaled = tmp_path / "scaled.dump"
        plain.write_text(melt_dump_text())
        scaled.write_text(melt_dump_text(scaled=True))
        a = read_trajectory(str(plain))[0]
        b = read_trajectory(str(scaled))[0]
        assert np.allclose(a.positions, b.positions, atol=1e-8)

    def test_rows_ordered_by_atom_id(self, tmp_path):
        text = melt_dump_text()
        head, tail = text.split("ITEM: ATOMS id mol x y z\n")
        rows = tail.strip().split("\n")
        path = tmp_path / "shuffled.dump"
        path.write_text(head + "ITEM: ATOMS id mol x y z\n"
                        + "\n".join(reversed(rows)) + "\n")
        a = read_trajectory(str(path))[0].chains()
        ref = read_trajectory_text(tmp_path, text)[0].chains()
        for mol in ref:
            assert np.allclose(a[mol], ref[mol])

    def test_frames_sorted_by_timestep(self, tmp_path):
        t0 = melt_dump_text(seed=1)
        t1 = melt_dump_text(seed=2).replace("ITEM: TIMESTEP\n0", "ITEM: TIMESTEP\n100", 1)
        path = tmp_path / "two.dump"
        path.write_text(t1 + t0)
        frames = read_trajectory(str(path))
        assert [f.timestep for f in frames] == [0, 100]

    def test_missing_mol_column(self, tmp_path):
        text = melt_dump_text().replace("ITEM: ATOMS id mol x y z", "ITEM: ATOMS id x y z")
        path = tmp_path / "bad.dump"
        path.write_text(text)
        with pytest.raises(PbcJonesError, match="molecule ids"):
            read_trajectory(str(path))

    def test_unknown_position_columns(self, tmp_path):
        text = melt_dump_text().replace("ITEM: ATOMS id mol x y z", "ITEM: ATOMS id mol q r s")
        path = tmp_path / "bad.dump"
        path.write_text(text)
        with pytest.raises(PbcJonesError, match="need x y z"):
            read_trajectory(str(path))

    def test_declared_count_mismatch(self, tmp_path):
        text = melt_dump_text().replace("ITEM: NUMBER OF ATOMS\n98", "ITEM: NUMBER OF ATOMS\n99")
        path = tmp_path / "bad.dump"
        path.write_text(text)
        with pytest.raises(PbcJonesError, match="declares 99 atoms"):
            read_trajectory(str(path))

    def test_duplicate_atom_ids(self, tmp_path):
        text = melt_dump_text()
        text = text.replace("\n2 1 ", "\n1 1 ", 1)
        path = tmp_path / "bad.dump"
        path.write_text(text)
        with pytest.raises(PbcJonesError, match="duplicate atom ids"):
            read_trajectory(str(path))

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.dump"
        path.write_text("\n")
        with pytest.raises(PbcJonesError, match="no frames"):
            read_trajectory(str(path))

    def test_unknown_format_name(self, tmp_path):
        with pytest.raises(PbcJonesError, match="unknown trajectory format"):
            read_trajectory("whatever", format="csv")


def read_trajectory_text(tmp_path, text):
    path = tmp_path / "ref.dump"
    path.write_text(text)
    return read_trajectory(str(path))


class TestXyzMol:
    def make(self, tmp_path, text):
        path = tmp_path / "frame.xyzm"
        path.write_text(text)
        return str(path)

    def test_two_frames(self, tmp_path):
        text = ("4\nbox 0 10 0 10 0 10\n"
                "1 1.0 1.0 1.0\n1 2.0 1.0 1.0\n2 5.0 5.0 5.0\n2 6.0 5.0 5.0\n"
                "2\n0 10 0 10 0 10\n"
                "1 3.0 3.0 3.0\n1 4.0 3.0 3.0\n")
        frames = read_trajectory(self.make(tmp_path, text), format="xyz-mol")
        assert len(frames) == 2
        chains = frames[0].chains()
        assert sorted(chains) == [1, 2]
        assert np.allclose(chains[2], [[5, 5, 5], [6, 5, 5]])
        assert np.allclose(frames[1].bounds, [[0, 10]] * 3)

    def test_bad_count(self, tmp_path):
        with pytest.raises(PbcJonesError, match="atom count"):
            read_trajectory(self.make(tmp_path, "two\nbox\n"), format="xyz-mol")

    def test_missing_box(self, tmp_path):
        text = "1\njust a comment\n1 0 0 0\n"
        with pytest.raises(PbcJonesError, match="box bounds"):
            read_trajectory(self.make(tmp_path, text), format="xyz-mol")

    def test_truncated(self, tmp_path):
        text = "3\n0 1 0 1 0 1\n1 0 0 0\n"
        with pytest.raises(PbcJonesError, match="truncated"):
            read_trajectory(self.make(tmp_path, text), format="xyz-mol")

    def test_row_needs_molecule(self, tmp_path):
        text = "1\n0 1 0 1 0 1\n0.0 0.0 0.0\n"
        with pytest.raises(PbcJonesError, match="molecule ids are required"):
            read_trajectory(self.make(tmp_path, text), format="xyz-mol")


class TestUnwrap:
    def test_jump_across_face(self):
        bounds = np.array([[0.0, 10.0]] * 3)
        pts = np.array([[9.5, 5, 5], [0.5, 5, 5], [1.5, 5, 5]])
        out = unwrap_chain(pts, bounds)
        assert np.allclose(out[:, 0], [9.5, 10.5, 11.5])

    def test_non_periodic_axis_untouched(self):
        bounds = np.array([[0.0, 10.0]] * 3)
        pts = np.array([[9.5, 5, 5], [0.5, 5, 5]])
        out = unwrap_chain(pts, bounds, periodic=(False, True, True))
        assert np.allclose(out, pts)

    def test_interior_steps_unchanged(self):
        bounds = np.array([[0.0, 10.0]] * 3)
        pts = np.array([[2.0, 2, 2], [3.0, 2.5, 2], [4.0, 3, 2]])
        assert np.allclose(unwrap_chain(pts, bounds), pts)


class TestInteriorSelection:
    def test_keeps_only_interior_chains(self, tmp_path):
        path = tmp_path / "melt.dump"
        path.write_text(melt_dump_text(interior=False, seed=3))
        frame = read_trajectory(str(path))[0]
        system = select_interior_chains(frame)
        kept = {c.id for c in system.chains}
        # brute check against the same unwrap rule
        expected = set()
        for mol, pts in frame.chains().items():
            p = unwrap_chain(pts, frame.bounds)
            if np.all((p > frame.bounds[:, 0]) & (p < frame.bounds[:, 1])):
                expected.add(f"mol{mol}")
        assert kept == expected
        assert 0 < len(kept) < 7

    def test_interior_melt_keeps_everything(self, tmp_path):
        path = tmp_path / "melt.dump"
        path.write_text(melt_dump_text())
        system = select_interior_chains(read_trajectory(str(path))[0])
        assert len(system.chains) == 7
        assert all(c.topology == "open" for c in system.chains)

    def test_empty_selection_warns(self, tmp_path):
        text = ("2\n0 1 0 1 0 1\n"
                "1 0.0 0.5 0.5\n1 0.9 0.5 0.5\n")
        path = tmp_path / "edge.xyzm"
        path.write_text(text)
        frame = read_trajectory(str(path), format="xyz-mol")[0]
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            system = select_interior_chains(frame)
        assert not system.chains
        assert any("no interior chains" in str(w.message) for w in rec)


class TestReports:
    def test_serialization_is_stable(self):
        rep = AnalysisReport("jones", {"directions": 50, "seed": 0},
                             {"polynomial": LaurentPoly({-2: -1, -10: -1}).to_json_obj()})
        again = AnalysisReport("jones", {"seed": 0, "directions": 50},
                              {"polynomial": LaurentPoly({-10: -1, -2: -1}).to_json_obj()})
        assert rep.to_json() == again.to_json()
        obj = json.loads(rep.to_json())
        assert obj["format"] == "pbcjones/report-v1"
        assert obj["generator"]["name"] == "pbcjones"

    def test_text_renders_polynomials_compactly(self):
        poly = LaurentPoly({4: 1, 12: 1, 16: -1})
        rep = AnalysisReport("jones", {"directions": 1},
                             {"polynomial": poly.to_json_obj()})
        text = report_text(rep)
        assert f"polynomial: {poly}" in text
        assert "coeffs" not in text

    def test_text_nested_structures(self):
        rep = AnalysisReport("slk", {}, {"values": [1, 2], "nested": {"a": True}})
        text = report_text(rep)
        assert text.startswith("pbcjones slk\n")
        assert "  values:" in text
        assert "    a: True" in text
