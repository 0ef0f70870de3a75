"""SYZ mirror construction for A_n-resolutions: fibration, wall-crossing, toric mirror and brane transforms."""

__version__ = "0.1.0"

from .geometry_core import (
    BasePoint,
    FiberType,
    ParamSurface,
    PointY,
    SurfaceSpec,
    classify_fiber,
    disk_area,
    fibration,
    lagrangian_defect,
    moment_map,
    on_wall,
    reduced_form_density,
)
from .affine_base import (
    BaseStructure,
    corrected_transition,
    global_w,
    monodromy_matrix,
    semiflat_transition,
)
from .toric_mirror import (
    Fan,
    LatticeTriangulation,
    MirrorPoint,
    build_an_fan,
    build_fan_from_triangulation,
    chart_transition,
    dual_chart,
    in_mirror,
    intersection_matrix,
)
from .branes import (
    ConormalBrane,
    LiftedPath,
    Potential,
    SphereBrane,
    intersection_count,
    is_admissible,
    is_strongly_admissible,
    reference_path,
    winding_number,
)
from .syz_functor import (
    BBrane,
    chern_degree,
    curvature_02_defect,
    transform_conormal,
    transform_fiber,
    transform_sphere_brane,
)
from .categories import (
    GradedHom,
    KClass,
    bside_ext,
    euler_form,
    fukaya_hom,
    hms_check,
    spherical_twist,
)
