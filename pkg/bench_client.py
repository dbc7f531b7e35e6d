"""
Simple Python client streaming benchmark rows over the WebSocket API
"""
import asyncio
import json
import sys

import websockets

from graphtsp.core.bench import CSV_HEADER
from graphtsp.core.generators import parse_spec


async def stream_bench(specs: list[dict], uri: str = "ws://localhost:8010/api/ws/bench"):
    """
    Send a bench request and print each row as it arrives

    Args:
        specs: Instance specs, e.g. [{"family": "gap_tour", "k": 2}]
        uri: WebSocket endpoint
    """
    print(f"Connecting to {uri}...")

    try:
        async with websockets.connect(uri) as websocket:
            await websocket.send(json.dumps({"specs": specs}))
            print(",".join(CSV_HEADER))

            async for message in websocket:
                data = json.loads(message)
                if data["type"] == "row":
                    row = data["row"]
                    print(",".join("" if row[k] is None else str(row[k]) for k in CSV_HEADER))
                elif data["type"] == "complete":
                    print(f"\nStream complete: {data['rows']} rows")
                    break
                elif data["type"] == "error":
                    print(f"\nError: {data['message']}")
                    return

    except websockets.exceptions.WebSocketException as e:
        print(f"\nWebSocket error: {e}")
        print("   Make sure the server is running: python -m graphtsp.main")


if __name__ == "__main__":
    # each argument is one spec, e.g. "gap_tour 3" "random_cubic 10 1"
    lines = sys.argv[1:] or ["gap_tour 1", "gap_tour 2", "gap_tour 3"]
    specs = [parse_spec(line).model_dump(exclude_none=True) for line in lines]
    asyncio.run(stream_bench(specs))
