"""
Matrix readers and writers, Newick, report documents, pipelines and the command line.
"""
import json

import numpy as np
import pytest
from pytest import approx

from core_model.chains import MergeChain, enumerate_chains
from core_model.dissimilarity import DissimilarityMap
from core_model.tree import tree_from_ultrametric
from core_model.ultrametric import Ultrametric
from io_cli.cli import cli_main
from io_cli.newick import emit_newick, leaf_depths, newick_pairwise_distances, parse_newick
from io_cli.parsers import format_distance_matrix, parse_distance_matrix, read_distance_matrix
from io_cli.report import RunReport, verify_run_report
from orchestrator import FanAnalysisPipeline, FitPipeline
from utils.error_handling import (
    EXIT_CAPACITY,
    EXIT_OK,
    EXIT_PARSE,
    AsymmetryError,
    CapacityError,
    DimensionMismatchError,
    DuplicateNameError,
    NewickParseError,
    NonNumericCellError,
    exit_code_for,
)


class TestPhylip:
    def test_square(self):
        text = "4\na 0 1 2 20\nb 1 0 10 28\nc 2 10 0 5\nd 20 28 5 0\n"
        d = parse_distance_matrix(text, "phylip")
        assert d.values.tolist() == [1, 2, 20, 10, 28, 5]
        assert d.taxa.labels == ("a", "b", "c", "d")

    def test_lower_triangular(self):
        d = parse_distance_matrix("3\na\nb 1\nc 4 6\n", "phylip")
        assert d.values.tolist() == [1, 4, 6]

    def test_asymmetry(self):
        with pytest.raises(AsymmetryError) as info:
            parse_distance_matrix("2\na 0 1.0\nb 1.5 0\n", "phylip")
        assert (info.value.line, info.value.column) == (3, 2)

    def test_small_asymmetry_is_averaged(self):
        d = parse_distance_matrix("2\na 0 1.0\nb 1.0000000001 0\n", "phylip")
        assert d.values[0] == approx(1.0)

    def test_non_numeric(self):
        with pytest.raises(NonNumericCellError) as info:
            parse_distance_matrix("3\na\nb x\nc 4 6\n", "phylip")
        assert info.value.line == 3

    def test_short_row(self):
        with pytest.raises(DimensionMismatchError):
            parse_distance_matrix("3\na 0 1 4\nb 1 0\nc 4 6 0\n", "phylip")

    def test_missing_rows(self):
        with pytest.raises(DimensionMismatchError):
            parse_distance_matrix("3\na\nb 1\n", "phylip")

    def test_duplicate_names(self):
        with pytest.raises(DuplicateNameError):
            parse_distance_matrix("2\na\na 1\n", "phylip")

    def test_empty(self):
        with pytest.raises(DimensionMismatchError):
            parse_distance_matrix("", "phylip")

    def test_write_then_read(self, ex25_map):
        text = format_distance_matrix(ex25_map, "phylip")
        assert parse_distance_matrix(text, "phylip").values.tolist() == ex25_map.values.tolist()


class TestCsv:
    def test_labelled(self):
        d = parse_distance_matrix(",a,b,c\na,0,1,4\nb,1,0,6\nc,4,6,0\n", "csv")
        assert d.values.tolist() == [1, 4, 6]
        assert d.taxa.labels == ("a", "b", "c")

    def test_header_only_names(self):
        d = parse_distance_matrix("a,b,c\n0,1,4\n1,0,6\n4,6,0\n", "csv")
        assert d.values.tolist() == [1, 4, 6]

    def test_missing_cell(self):
        with pytest.raises(DimensionMismatchError):
            parse_distance_matrix(",a,b,c\na,0,1,4\nb,1,0,\nc,4,6,0\n", "csv")

    def test_asymmetry(self):
        with pytest.raises(AsymmetryError):
            parse_distance_matrix("a,b\n0,1\n2,0\n", "csv")

    def test_write_then_read(self, ex25_map):
        text = format_distance_matrix(ex25_map, "csv")
        d = parse_distance_matrix(text, "csv")
        assert d.values.tolist() == ex25_map.values.tolist()
        assert d.taxa.labels == ex25_map.taxa.labels

    def test_extension_selects_format(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("a,b\n0,3\n3,0\n")
        assert read_distance_matrix(str(path)).values.tolist() == [3]


class TestNewick:
    def test_three_taxa(self):
        chain = MergeChain.from_merges(3, [(0, 1), (0, 2)])
        tree = tree_from_ultrametric(Ultrametric(chain, (1, 3)), ["a", "b", "c"])
        assert emit_newick(tree) == "((a:0.5,b:0.5):1,c:1.5);"

    def test_two_taxa(self):
        tree = tree_from_ultrametric(Ultrametric(MergeChain.from_merges(2, [(0, 1)]), (5.0,)), ["a", "b"])
        assert emit_newick(tree) == "(a:2.5,b:2.5);"

    def test_fork_depths(self):
        fork = MergeChain.from_merges(4, [(0, 1), (2, 3), (0, 2)])
        text = emit_newick(tree_from_ultrametric(Ultrametric(fork, (1, 5, 15))))
        assert text == "((1:0.5,2:0.5):7,(3:2.5,4:2.5):5);"
        assert leaf_depths(parse_newick(text)) == approx({"1": 7.5, "2": 7.5, "3": 7.5, "4": 7.5})

    def test_distances(self):
        d = newick_pairwise_distances("((a:0.5,b:0.5):1,c:1.5);", ["a", "b", "c"])
        assert d.values.tolist() == approx([1, 3, 3])

    def test_quoted_labels(self):
        chain = MergeChain.from_merges(2, [(0, 1)])
        text = emit_newick(tree_from_ultrametric(Ultrametric(chain, (2.0,)), ["it's", "b c"]))
        assert text == "('b c':1,'it\\'s':1);"
        assert set(leaf_depths(parse_newick(text))) == {"it's", "b c"}

    @pytest.mark.parametrize("text", ["((a,b),c)", "((a,b),c;", "(a,b));", "(a,b);(c,d);", "  "])
    def test_malformed(self, text):
        with pytest.raises(NewickParseError):
            parse_newick(text)

    def test_unknown_leaf(self):
        with pytest.raises(NewickParseError):
            newick_pairwise_distances("(a:1,z:1);", ["a", "b"])

    def test_duplicate_leaves(self):
        with pytest.raises(NewickParseError):
            newick_pairwise_distances("((a:1,a:1):1,c:2);", ["a", "c"])

    @pytest.mark.parametrize("n", [3, 5, 6])
    def test_random_trees_round_trip(self, rng, n):
        chains = list(enumerate_chains(n))
        labels = [f"t{i}" for i in range(n)]
        for _ in range(25):
            chain = chains[rng.integers(len(chains))]
            x = Ultrametric(chain, tuple(np.sort(rng.uniform(0.0, 10.0, n - 1)).tolist()))
            text = emit_newick(tree_from_ultrametric(x, labels), digits=17)
            d = newick_pairwise_distances(text, labels)
            assert d.values.tolist() == approx(x.expand().tolist(), rel=1e-9, abs=1e-9)
            depths = leaf_depths(parse_newick(text))
            assert list(depths.values()) == approx([x.levels[-1] / 2] * n, rel=1e-9)


class TestPipelines:
    def test_fit_report(self, ex25_map):
        report = FitPipeline("exact").run(ex25_map)
        assert report.method == "exact"
        assert report.squared_error <= 914 / 3 + 1e-9
        assert report.upgma_squared_error == approx(388)
        assert report.improvement_over_upgma >= 250 / 3 - 1e-9
        assert report.squared_error_exact is None
        assert verify_run_report(report, ex25_map)

    def test_rational_report(self, ex25_map):
        report = FitPipeline("extended", exact_rational=True).run(ex25_map)
        assert report.squared_error_exact == "914/3"
        assert report.topology == "(((1,2),3),4)"
        assert [step.level for step in report.chain] == approx([1, 6, 53 / 3])

    def test_cone_listing(self, prop35_map):
        report = FitPipeline("upgma", list_cones=True).run(prop35_map)
        assert len(report.cones.chains) == 4
        assert all(len(chain) == 3 for chain in report.cones.chains)

    def test_report_round_trips_through_json(self, ex25_map):
        report = FitPipeline("brute").run(ex25_map)
        again = RunReport.model_validate_json(report.model_dump_json())
        assert again == report
        assert "cones" in json.loads(report.model_dump_json())

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            FitPipeline("neighbor-joining")

    def test_capacity(self):
        with pytest.raises(CapacityError):
            FitPipeline("brute").run(DissimilarityMap.from_values([1.0] * 28))

    def test_witness_report(self):
        report = FanAnalysisPipeline().witness(4)
        assert report.strict_chains == 6
        assert report.bound == 6
        assert report.contains_all_root_combs


class TestCli:
    def test_fit_exact(self, ex25_file, capsys):
        assert cli_main(["fit", "--input", ex25_file, "--method", "exact"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["squared_error"] <= 304.667
        assert report["improvement_over_upgma"] >= 83.33

    def test_fit_newick_two_taxa(self, tmp_path, capsys):
        path = tmp_path / "two.phy"
        path.write_text("2\na 0 5\nb 5 0\n")
        assert cli_main(["fit", "--input", str(path), "--method", "upgma", "--output", "newick"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "(a:2.5,b:2.5);"

    def test_fit_accepts_threads(self, ex25_file, capsys):
        assert cli_main(["fit", "--input", ex25_file, "--method", "upgma", "--threads", "2"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["squared_error"] == approx(388)

    def test_parse_error(self, tmp_path, capsys):
        path = tmp_path / "bad.phy"
        path.write_text("2\na 0 1.0\nb 1.5 0\n")
        assert cli_main(["fit", "--input", str(path)]) == EXIT_PARSE
        assert "line 3" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert cli_main(["fit", "--input", str(tmp_path / "none.phy")]) == EXIT_PARSE

    def test_capacity(self, tmp_path):
        names = [f"t{i}" for i in range(8)]
        rows = [" ".join([name] + [str(abs(i - j)) for j in range(8)]) for i, name in enumerate(names)]
        path = tmp_path / "eight.phy"
        path.write_text("8\n" + "\n".join(rows) + "\n")
        assert cli_main(["fit", "--input", str(path), "--method", "brute"]) == EXIT_CAPACITY
        assert cli_main(["fit", "--input", str(path), "--method", "upgma"]) == EXIT_OK

    def test_usage_error(self):
        assert cli_main(["fit"]) == EXIT_PARSE
        assert cli_main(["unknown"]) == EXIT_PARSE

    def test_witness(self, capsys):
        assert cli_main(["witness", "--n", "4"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["strict_chains"] == 6

    def test_invalid_witness(self):
        assert cli_main(["witness", "--n", "4", "--a", "2", "--b", "1"]) == 1

    def test_schema(self, capsys):
        assert cli_main(["schema", "--document", "census"]) == EXIT_OK
        assert "distinct_six_sets" in json.loads(capsys.readouterr().out)["properties"]

    def test_census(self, capsys):
        args = ["census", "--n", "3", "--samples", "2000", "--chunk-size", "500", "--no-progress"]
        assert cli_main(args) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["max_cardinality"] == 2

    def test_exit_code_mapping(self):
        assert exit_code_for(FileNotFoundError()) == EXIT_PARSE
        assert exit_code_for(RuntimeError()) == 1
