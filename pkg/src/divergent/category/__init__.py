from .baire import (
    BaireChain,
    DenseOpenOracle,
    PointComplementOracle,
    Refinement,
    Stage,
    WholeLineOracle,
    baire_witness,
    chain_failures,
    run_chain,
)
from .bump import BumpDemo, TentFunction, bump_transfer_demo
from .waves import WaveProbeResult, farey, wave_family_probe
from .witnesses import (
    ScaledUnionOracle,
    TranslationDenseOracle,
    Witness,
    log_form_check,
    remark_witness,
    scaled_union_oracle,
    theorem3_witness,
    translation_dense_oracle,
)
