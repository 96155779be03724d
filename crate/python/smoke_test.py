"""Smoke test for the netcx Python bindings. Exits nonzero on failure."""

import json
import sys

import netcx_py as nx


def main() -> int:
    assert nx.topologies() == ["azure-1", "azure-2", "azure-3", "cli-3", "k8s-3", "aci-3"]

    ir = nx.generate("azure-1")
    assert json.loads(ir)["dialect"] == "azure"
    m = nx.build_graph(ir, name="azure-1").metrics()
    assert (m.ip_excess_degree, m.i_types, m.p_types) == (37, 8, 8), m
    assert f"{m.nodes_per_endpoint:.2f}" == "7.33", m

    files = nx.generate_native("k8s-3")
    graph, row = nx.analyze("k8s", files, name="k8s-3")
    assert row.to_dict()["l_edges"] == 82, row
    assert nx.build_graph(nx.parse("k8s", files)).metrics().ip_excess_degree == row.ip_excess_degree

    counts = {t: n for t, _, n in nx.build_graph(ir).type_counts()}
    assert counts["ipv4"] == 34, counts
    assert graph.to_dot().startswith("graph types {")
    assert "<graphml" in graph.to_graphml()

    table = nx.render_table([m, row], "csv")
    assert table.splitlines()[1] == "azure-1,7.33,55,195,8,8,37", table

    text, ok = nx.reproduce()
    assert ok and "36 of 36 cells within tolerance" in text

    assert nx.cidr_contains("10.0.0.0/8", "10.1.0.0/16")
    assert not nx.cidr_contains("10.1.0.0/16", "10.1.0.0/16")
    try:
        nx.generate("azure-9")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown topology accepted")

    print("smoke test passed:", m)
    return 0


if __name__ == "__main__":
    sys.exit(main())
