// Browser entry: point the client at the service and start the shell.
// Default assumes the service runs on localhost:8000; override with
// ?api=http://host:port.

import { setBase } from "./api.js";
import { main } from "./app.js";

const params = new URLSearchParams(window.location.search);
setBase(params.get("api") ?? "http://127.0.0.1:8000");
main();
