// Browser entry point: same-origin API, strategy passed by the server
// through the query string (?strategy=uncertainty).

import { HttpApi } from "./api.js";
import { initApp } from "./main.js";

const params = new URLSearchParams(window.location.search);
initApp(document, new HttpApi(""), {
  session: params.get("session") ?? "ui",
  strategy: params.get("strategy") ?? "random",
});
