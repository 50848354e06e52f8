"""MCP tool 테스트"""

from recollement_verifier.utils.fixtures import job_spec_text
from recollement_verifier.utils.tool import (
    TOOLS_INFO,
    get_fixture,
    list_fixtures,
    run_verification,
)


def test_tools_info_names():
    assert [tool["name"] for tool in TOOLS_INFO] == ["run_verification", "list_fixtures", "get_fixture"]


async def test_list_and_get_fixture():
    names = await list_fixtures()
    assert {"A2", "A3", "LOOP2", "PROD", "ALG_CYCLE"} <= set(names)

    fixture = await get_fixture("PROD")
    assert fixture["idempotents"] == [["3"], ["1", "2"]]
    assert await get_fixture("NOPE") is None


async def test_run_verification_payload():
    payload = await run_verification(job_spec_text("A2", "check_axioms", E=["2"]))
    assert payload["status"] == "OK"
    assert payload["exit_code"] == 0
    assert payload["universe"]["B"]["size"] == 3


async def test_run_verification_overrides():
    text = job_spec_text("A2", "glue_weak_tau", E=["1"], Z_A="all", Z_C="all")
    refused = await run_verification(text)
    assert refused["exit_code"] == 2

    forced = await run_verification(text, dmax=2, force=True)
    assert forced["status"] == "UNSOUND"
    assert forced["run"]["parameters"]["dmax"] == 2


async def test_run_verification_bad_spec():
    payload = await run_verification("not a spec")
    assert payload["status"] == "ERROR"
    assert payload["exit_code"] == 1
