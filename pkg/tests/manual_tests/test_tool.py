import sys
import json
import asyncio
from pathlib import Path

# 경로 추가
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root / "src"))

from recollement_verifier.utils.fixtures import job_spec_text
from recollement_verifier.utils.formatter import MarkdownFormat
from recollement_verifier.utils.tool import (
    get_fixture,
    list_fixtures,
    run_verification,
)


async def test_get_fixture():
    """fixture 조회 테스트"""
    print("\n" + "=" * 60)
    print("테스트: fixture 조회")
    print("=" * 60)

    print(f"사용 가능: {', '.join(await list_fixtures())}")
    name = input("fixture 이름을 입력하세요 (예: A2): ").strip() or "A2"

    fixture = await get_fixture(name)
    if fixture:
        print("✅ 성공!")
        print("\n" + json.dumps(fixture, ensure_ascii=False, indent=2))
    else:
        print("❌ 실패")


async def test_run_task():
    """fixture 위의 task 실행 테스트"""
    print("\n" + "=" * 60)
    print("테스트: task 실행")
    print("=" * 60)

    name = input("fixture 이름 (예: PROD): ").strip() or "PROD"
    E = input("idempotent vertex (예: 3, 비우면 recollement 없음): ").strip()
    task = input("task 이름 (예: check_axioms): ").strip() or "check_axioms"

    spec_text = job_spec_text(name, task, E=E.replace(",", " ").split() if E else None)
    print(f"\n🔍 spec:\n{spec_text}")

    report = await run_verification(spec_text)
    if isinstance(report, dict):
        print(MarkdownFormat.report_summary(report))
        print(f"exit code: {report['exit_code']}")
    else:
        print(f"❌ 실패: {report}")


async def test_spec_file():
    """spec 파일 실행 테스트"""
    print("\n" + "=" * 60)
    print("테스트: spec 파일 실행")
    print("=" * 60)

    path = input("spec 파일 경로: ").strip()
    if not path:
        print("⚠️  경로가 비어 있습니다.")
        return

    report = await run_verification(Path(path).read_text(encoding="utf-8"))
    if isinstance(report, dict):
        print("\n" + json.dumps(report, ensure_ascii=False, indent=2))
    else:
        print(f"❌ 실패: {report}")


async def main():
    """메인 메뉴"""
    while True:
        print("\n" + "=" * 60)
        print("테스트 메뉴")
        print("=" * 60)
        print("1. fixture 조회 테스트")
        print("2. task 실행 테스트")
        print("3. spec 파일 실행 테스트")
        print("4. 종료")
        print("=" * 60)

        choice = input("\n선택 (1-4): ")

        if choice == "1":
            await test_get_fixture()
        elif choice == "2":
            await test_run_task()
        elif choice == "3":
            await test_spec_file()
        elif choice == "4":
            print("\n👋 종료합니다.")
            break
        else:
            print("\n⚠️  잘못된 선택입니다.")


if __name__ == "__main__":
    print("\n🚀 검증 tool 수동 테스트 시작\n")

    try:
        asyncio.run(main())
    except KeyboardInterrupt:
        print("\n\n👋 사용자에 의해 종료되었습니다.")
    except Exception as e:
        print(f"\n❌ 오류 발생: {e}")
        import traceback
        traceback.print_exc()
