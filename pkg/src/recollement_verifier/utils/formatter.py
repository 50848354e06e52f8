"""출력 포맷팅 유틸리티

검증 리포트를 MCP 서버 출력 형식과 사람이 읽는 요약으로 변환합니다.
"""
from typing import Any, Dict, List


class JsonRpcFormat:
    VERSION = "2.0"

    @staticmethod
    def success(msg_id: Any, result: Any) -> Dict:
        return {
            "jsonrpc": JsonRpcFormat.VERSION,
            "id": msg_id,
            "result": result
        }

    @staticmethod
    def error(msg_id: Any, error: Any) -> Dict:
        return {
            "jsonrpc": JsonRpcFormat.VERSION,
            "id": msg_id,
            "error": error
        }


class ResponseFormat:

    @staticmethod
    def success(content: Any) -> Dict:
        return {
            "content": [{"type": "text", "text": content}],
            "isError": False
        }

    @staticmethod
    def error(content: Any) -> Dict:
        return {
            "content": [{"type": "text", "text": content}],
            "isError": True
        }


def _format_list_items(items: List[str]) -> str:
    """리스트 항목을 Markdown 형식으로 변환합니다."""
    return "\n".join(f"- {item}" for item in items)


_STATUS_ICON = {"OK": "✅", "REFUSED": "⛔", "UNSOUND": "⚠️", "ERROR": "❌"}


class MarkdownFormat:

    @staticmethod
    def report_summary(data: Dict[str, Any]) -> str:
        """리포트(dict)를 Markdown 요약으로 변환합니다."""

        sections = []
        status = data.get("status", "ERROR")
        sections.append(f"# {_STATUS_ICON.get(status, '')} {data.get('task', '')}: {status}\n\n")

        # Universe
        if data.get("universe"):
            sections.append("## 📦 Universe\n")
            sections.append(_format_list_items([
                f"{role}: {info['algebra']} (p={info['p']}, dmax={info['dmax']}, {info['size']}개)"
                for role, info in data["universe"].items()
            ]))
            sections.append("\n\n")

        # 가설
        if data.get("hypotheses"):
            sections.append("## 📍 가설\n")
            sections.append(_format_list_items([
                f"{h['name']}: {h['verdict']}" + (f" ({h['witness']})" if h.get("witness") else "")
                for h in data["hypotheses"]
            ]))
            sections.append("\n\n")

        # 검증
        verification = data.get("verification", [])
        if verification:
            counts: Dict[str, int] = {}
            for entry in verification:
                counts[entry["verdict"]] = counts.get(entry["verdict"], 0) + 1
            sections.append("## 📊 검증\n")
            sections.append(_format_list_items([f"{k}: {v}" for k, v in sorted(counts.items())]))
            sections.append("\n\n")

            failures = [e for e in verification if e.get("asserted", True) and e["verdict"] in ("FAIL", "UNKNOWN")]
            if failures:
                sections.append("## ⚠️ 실패 / 미결정\n")
                sections.append(_format_list_items([
                    f"{e['condition']} [{e.get('subject', '')}]: {e['verdict']}"
                    + (f" ({e['witness']})" if e.get("witness") else "")
                    for e in failures
                ]))
                sections.append("\n\n")

        if data.get("notes"):
            sections.append("## 💡 참고\n")
            sections.append(_format_list_items(data["notes"]))
            sections.append("\n")

        return "".join(sections)
