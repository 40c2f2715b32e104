import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from graphdecay import EntanglementDecay, Graph, GraphDiagonalTwirl, InputError, PauliMap, dephasing, exact_entanglement
from graphdecay.entanglement import QuantifierSpec
from graphdecay.graph import Partition
from graphdecay.oracle import graph_state_vector


def test_params_roundtrip():
    est = EntanglementDecay(graph=Graph.path(3), method="bound")
    params = est.get_params()
    assert params["method"] == "bound" and params["channel"] == "depolarizing"
    est.set_params(quantifier="eof")
    assert clone(est).get_params()["quantifier"] == "eof"


def test_transform_shapes_and_values():
    ps = np.linspace(0, 1, 5)
    est = EntanglementDecay(graph=Graph.path(2), quantifier="eof").fit()
    out = est.transform(ps)
    assert out.shape == (5, 1)
    assert out[0, 0] == pytest.approx(1.0)
    assert out[-1, 0] == pytest.approx(0.0, abs=1e-12)
    assert est.get_feature_names_out().tolist() == ["exact_eof"]
    assert est.fit_transform(ps.reshape(-1, 1)).shape == (5, 1)


def test_callable_channel_and_partition_labels():
    g = Graph.ring(4)
    est = EntanglementDecay(graph=(4, g.edges), partition=[0, 0, 1, 1], channel=dephasing).fit()
    assert est.n_boundary_ == 4
    want = exact_entanglement(g, Partition([0, 0, 1, 1]), PauliMap.uniform(4, dephasing(0.3)), QuantifierSpec())
    assert est.transform([0.3])[0, 0] == pytest.approx(want)


def test_bound_never_exceeds_exact():
    ps = np.linspace(0, 1, 7)
    kw = dict(graph=Graph.path(6), partition=[0, 0, 0, 1, 1, 1])
    exact = EntanglementDecay(**kw).fit().transform(ps)
    bound = EntanglementDecay(method="bound", **kw).fit().transform(ps)
    assert np.all(bound <= exact + 1e-9)


def test_validation_errors():
    with pytest.raises(InputError):
        EntanglementDecay(graph=Graph.path(3), method="fast").fit()
    with pytest.raises(InputError):
        EntanglementDecay(graph=Graph.path(3), channel="amplitude").fit()
    with pytest.raises(InputError):
        EntanglementDecay(graph="path").fit()
    with pytest.raises(InputError):
        EntanglementDecay(graph=Graph.path(3), partition=[0, 1]).fit()
    est = EntanglementDecay(graph=Graph.path(3)).fit()
    with pytest.raises(InputError):
        est.transform([1.5])
    with pytest.raises(InputError):
        est.transform(np.zeros((3, 2)))


def test_pipeline_composition():
    pipe = make_pipeline(FunctionTransformer(lambda x: x / 2), EntanglementDecay(graph=Graph.path(2)))
    out = pipe.fit_transform(np.array([[0.0], [1.0]]))
    direct = EntanglementDecay(graph=Graph.path(2)).fit().transform([0.0, 0.5])
    assert np.allclose(out, direct)


def test_twirl_transformer():
    g = Graph.path(3)
    tw = GraphDiagonalTwirl(graph=g).fit()
    psi = graph_state_vector(g)
    rows = np.stack([psi, np.ones(8) * 2])
    out = tw.transform(rows)
    assert out.shape == (2, 8)
    assert out[0] == pytest.approx(np.eye(8)[0])
    assert np.allclose(out.sum(axis=1), 1.0)
    with pytest.raises(InputError):
        tw.transform(np.ones((1, 4)))
    with pytest.raises(InputError):
        tw.transform(np.zeros((1, 8)))
