import numpy as np
import pytest

from qbsim.mesh import MeshAlignmentError, MeshError, PermittivityProfile, build_mesh, sample_eps
from qbsim.constants import SI


def test_nodes_span_cell():
    m = build_mesh(1.5, 2501)
    assert m.nodes[0] == -0.75 and m.nodes[-1] == 0.75
    assert m.n1 == 2500
    assert np.allclose(np.diff(m.nodes), 6e-4)
    assert m.dof_nodes.size == m.n1


def test_nearest_node_wraps_right_boundary():
    m = build_mesh(1.0, 11)
    assert m.nearest_node(-0.5) == 0
    assert m.nearest_node(0.5) == 0
    assert m.nearest_node(0.04) == 5
    with pytest.raises(MeshError):
        m.nearest_node(0.7)


@pytest.mark.parametrize("Rx,n0", [(0.0, 11), (-1.0, 11), (1.0, 2), (1.0, 10.5)])
def test_bad_mesh(Rx, n0):
    with pytest.raises(MeshError):
        build_mesh(Rx, n0)


def test_profile_validation():
    with pytest.raises(MeshError):
        PermittivityProfile(0.5, 0.1)
    with pytest.raises(MeshError):
        PermittivityProfile(2.0, 0.0)
    with pytest.raises(MeshError):
        PermittivityProfile(2.0, 2.0).check_fits(build_mesh(1.0, 11))


def test_alignment():
    PermittivityProfile(7.0, 6e-3).check_aligned(build_mesh(1.5, 2501))
    with pytest.raises(MeshAlignmentError):
        PermittivityProfile(7.0, 6e-3).check_aligned(build_mesh(1.5, 2500))


def test_slab_faces_belong_to_slab():
    m = build_mesh(1.5, 2501)
    p = PermittivityProfile(7.0, 6e-3)
    # 6 mm / 0.6 mm = 10 elements -> 11 nodes
    assert p.slab_node_count(m) == 11
    assert sample_eps(p, 0.0) == pytest.approx(7 * SI.eps0)
    assert sample_eps(p, 0.5) == pytest.approx(SI.eps0)
