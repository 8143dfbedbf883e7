"""Decision trees and boosted ensembles with masked graph-walk split features.

The heavy lifting lives in the compiled extension ``_treeg``; this package
re-exports its public surface.
"""

try:
    from ._treeg import (  # type: ignore[attr-defined]
        Model,
        fit,
        line_graph,
        load_tudataset,
        make_synth,
        phi,
        phi_aggregate,
        stratified_folds,
    )
except ImportError:  # pragma: no cover - flat layout used by the build tree
    from _treeg import (  # type: ignore[no-redef]
        Model,
        fit,
        line_graph,
        load_tudataset,
        make_synth,
        phi,
        phi_aggregate,
        stratified_folds,
    )

__all__ = [
    "Model",
    "fit",
    "line_graph",
    "load_tudataset",
    "make_synth",
    "phi",
    "phi_aggregate",
    "stratified_folds",
]
