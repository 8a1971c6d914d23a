"""Property graph schema toolkit.

Extract a schema from instance data, refine it with a catalog of editing
operations, diff and patch schema versions, gate changes on backwards
compatibility, and keep the history in a plain-file workspace.
"""

from .compat import CompatReport, CompatViolation, check_compat
from .diff import (
    ChangeKind,
    ChangeRecord,
    DiffConflictError,
    ElementStatus,
    SchemaDiff,
    annotate_visual,
    apply_diff,
    compute_diff,
    render_semantic,
)
from .dsl import (
    ParseError,
    SchemaParseError,
    SchemaText,
    SourceSpan,
    parse_schema,
    serialize_schema,
    span_of,
)
from .extract import (
    ExtractionError,
    ExtractionOptions,
    extract_schema,
    infer_property_type,
    infer_subtypes,
)
from .graph import (
    ConformanceReport,
    GraphEdge,
    GraphIntegrityError,
    GraphLoadError,
    GraphNode,
    PropertyGraph,
    PropertyValue,
    Violation,
    ViolationKind,
    dump_graph,
    kind_of,
    load_graph,
    load_graph_file,
    validate_conformance,
)
from .model import (
    Cardinality,
    DataType,
    EdgeType,
    NodeType,
    PropertyDef,
    SchemaGraph,
    SchemaIntegrityError,
    UnknownElementError,
    canonicalize,
    display_labels,
    is_subtype,
    least_common_supertype,
    schema_equal,
    schema_to_json,
)
from .refine import (
    AddEdgeType,
    AddNodeType,
    AddProperty,
    BasicEdit,
    DuplicateNameError,
    EditCommandError,
    EditError,
    EdgeRef,
    FlipEdgeDirection,
    RemoveEdgeType,
    RemoveNodeType,
    RemoveProperty,
    RenameType,
    SetCardinality,
    SetPropertyRequired,
    SetPropertyType,
    SetSupertype,
    apply_basic_edit,
    apply_edit_command,
    apply_edits,
    duplicate_type,
    escalate_property,
    labels_from_name,
    merge_intersection,
    merge_union,
    split_node_type,
)
from .workspace import (
    CorruptWorkspaceError,
    UnknownVersionError,
    Version,
    Workspace,
    WorkspaceError,
    export_text,
    load,
)

__version__ = "0.1.0"
