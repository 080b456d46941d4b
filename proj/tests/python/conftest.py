import os
import sys

# Under ctest, G2T_BUILD_TREE names the freshly built package; keep an installed copy from shadowing it.
tree = os.environ.get("G2T_BUILD_TREE")
if tree:
    sys.meta_path[:] = [f for f in sys.meta_path if not type(f).__module__.startswith("_editable_")]
    sys.path.insert(0, tree)
