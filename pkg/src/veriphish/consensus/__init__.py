from .validators import (
    InvalidValidatorSetError,
    ValidatorSet,
    leader_for,
    max_faults,
    quorum_size,
)
from .messages import (
    COMMIT,
    MESSAGE_KINDS,
    PREPARE,
    PRE_PREPARE,
    ROUND_CHANGE,
    ConsensusMessage,
    ProposeRequest,
    Timeout,
    message_from_doc,
    message_to_doc,
    propose_request_from_doc,
    propose_request_to_doc,
)
from .engine import Engine, IDLE, NORMAL, PREPARED, PREPREPARED, VALIDATOR
from .simulator import (
    CRASH,
    EQUIVOCATE,
    MUTE,
    DelayModel,
    FaultSpec,
    PartitionSpec,
    Scenario,
    ScenarioInvalidError,
    SimulationReport,
    WorkloadItem,
    load_scenario,
    normal_ids,
    run_simulation,
    scenario_from_doc,
    validator_ids,
)
